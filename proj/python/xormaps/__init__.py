"""Fuzzy-XOR interval map laboratory — thin Python facade over the C++ core.

The heavy lifting (parsing, exact piecewise-affine algebra, chaos
diagnostics) happens in the compiled ``_xormaps`` module; this package turns
its JSON payloads into plain Python objects.
"""

from __future__ import annotations

import json
from typing import Any

try:  # wheel layout: the extension lives inside this package
    from . import _xormaps
except ImportError:  # in-tree layout: the extension sits on PYTHONPATH
    import _xormaps

NotPiecewiseAffine = _xormaps.NotPiecewiseAffine
ParseError = _xormaps.ParseError
canonical = _xormaps.canonical
catalog = _xormaps.catalog
derivative = _xormaps.derivative
eval_map = _xormaps.eval_map

__all__ = [
    "ParseError",
    "NotPiecewiseAffine",
    "canonical",
    "catalog",
    "eval_map",
    "derivative",
    "to_piecewise_affine",
    "pa_eval",
    "branches",
    "diagnose",
]


def to_piecewise_affine(text: str) -> dict[str, Any]:
    """Exact piecewise-affine form as ``{breakpoints, slopes, intercepts}``."""
    return json.loads(_xormaps.to_piecewise_affine_json(text))


def pa_eval(pa: dict[str, Any], x: float) -> float:
    """Evaluate a piecewise-affine dict (as from :func:`to_piecewise_affine`)."""
    return _xormaps.pa_eval_json(json.dumps(pa), x)


def branches(text: str) -> dict[str, Any]:
    """Full-branch decomposition with per-branch intervals and images."""
    return json.loads(_xormaps.branches_json(text))


def diagnose(text: str, **budgets: Any) -> dict[str, Any]:
    """Full chaos-diagnostics report (seeds/iterates/bins keyword budgets)."""
    return json.loads(_xormaps.diagnose_json(text, **budgets))
