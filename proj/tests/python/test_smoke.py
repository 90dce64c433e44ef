"""Smoke tests for the Python bindings (small budgets; the C++ suite is the
authority for numerics)."""

import math

import pytest

import xormaps


def test_catalog_lists_all_maps():
    assert xormaps.catalog() == [
        "logistic",
        "tent",
        "inverted_tent",
        "doubling",
        "cubic",
    ]


def test_eval_and_derivative():
    assert xormaps.eval_map("tent", 0.25) == pytest.approx(0.5)
    assert xormaps.eval_map("xor(tent, inverted_tent)", 0.125) == pytest.approx(0.5)
    assert xormaps.derivative("tent", 0.25) == pytest.approx(2.0)
    assert xormaps.derivative("logistic(r=4)", 0.25) == pytest.approx(2.0)


def test_canonical_round_trip():
    text = xormaps.canonical("xor( tent , mirror( tent ) )")
    assert text == xormaps.canonical(text)
    with pytest.raises(xormaps.ParseError):
        xormaps.canonical("xor(tent")


def test_piecewise_affine_matches_eval():
    pa = xormaps.to_piecewise_affine("xor(tent, inverted_tent)")
    assert pa["breakpoints"][0] == 0.0
    assert pa["breakpoints"][-1] == 1.0
    for i in range(101):
        x = i / 100
        assert xormaps.pa_eval(pa, x) == pytest.approx(
            xormaps.eval_map("xor(tent, inverted_tent)", x), abs=1e-12
        )
    with pytest.raises(xormaps.NotPiecewiseAffine):
        xormaps.to_piecewise_affine("logistic(r=4)")


def test_branches():
    doc = xormaps.branches("xor(tent, inverted_tent)")
    assert doc["count"] == 4
    assert doc["full_count"] == 4
    assert all(b["full"] for b in doc["list"])


def test_diagnose_small_budget():
    doc = xormaps.diagnose(
        "xor(tent, inverted_tent)",
        base_seed=1,
        seeds=4,
        iterates=20000,
        transient=100,
        bins=200,
        grid_n=400,
    )
    assert doc["verdict"] == "Chaotic"
    assert doc["lyapunov"]["median"] == pytest.approx(math.log(4.0), abs=1e-6)
    assert doc["coverage"] == 1.0


def test_diagnose_deterministic_across_threads():
    kwargs = dict(seeds=4, iterates=5000, transient=50, bins=100, grid_n=200)
    a = xormaps.diagnose("xor(tent, doubling)", threads=1, **kwargs)
    b = xormaps.diagnose("xor(tent, doubling)", threads=4, **kwargs)
    assert a == b
