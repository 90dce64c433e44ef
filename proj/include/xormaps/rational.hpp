#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace xormaps {

// Thrown when a rational operation would not fit int64 after reduction.
// Callers that use rationals as an exactness fast path catch this and fall
// back to floating point.
struct RationalOverflow : std::overflow_error {
  RationalOverflow() : std::overflow_error("rational overflow") {}
};

// Exact rational number, always normalized: den > 0, gcd(|num|, den) = 1.
// Arithmetic goes through __int128 intermediates and throws RationalOverflow
// if the reduced result escapes int64.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }
  // NOLINTNEXTLINE(google-explicit-constructor) integers promote losslessly
  constexpr Rational(std::int64_t value) : num_(value), den_(1) {}

  static Rational from_i128(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 g = gcd128(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (!fits(num) || !fits(den)) throw RationalOverflow{};
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  bool is_integer() const { return den_ == 1; }

  // True when the denominator is a power of two (exact in binary floating
  // point for the magnitudes used here).
  bool is_dyadic() const { return (den_ & (den_ - 1)) == 0; }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                     i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                     i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.num_ = -a.num_;
    r.den_ = a.den_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return !(b < a);
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return !(a < b);
  }

  int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

  friend Rational abs(const Rational& a) { return a.num_ < 0 ? -a : a; }

 private:
  using i128 = __int128;

  static constexpr bool fits(__int128 v) {
    return v >= INT64_MIN && v <= INT64_MAX;
  }

  static constexpr __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void assign(std::int64_t num, std::int64_t den) {
    *this = from_i128(num, den);
  }

  std::int64_t num_{0};
  std::int64_t den_{1};
};

}  // namespace xormaps
