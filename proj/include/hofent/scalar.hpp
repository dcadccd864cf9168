#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

namespace hofent {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Geometric tolerance used when comparing floating interval endpoints.
inline constexpr double kGeomTol = 1e-10;
/// Root tolerance for bisection on non-polynomial pieces.
inline constexpr double kRootTol = 1e-12;

/// Parses "p/q", an integer, or a decimal literal ("1.8") into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// Natural log of a positive big integer without overflowing a double.
double log_bigint(const BigInt& n);

/// Per-scalar behaviour needed by the templated geometry code. `double` uses
/// tolerant comparisons; `Rational` compares exactly.
template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static bool equal(double a, double b) { return std::abs(a - b) <= kGeomTol; }
  static bool less(double a, double b) { return a < b - kGeomTol; }
  static bool positive_gap(double lo, double hi) { return hi - lo > kGeomTol; }
  static double midpoint(double a, double b) { return 0.5 * (a + b); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational from_double(double x) { return Rational(x); }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
  static bool less(const Rational& a, const Rational& b) { return a < b; }
  static bool positive_gap(const Rational& lo, const Rational& hi) { return lo < hi; }
  static Rational midpoint(const Rational& a, const Rational& b) {
    Rational m = (a + b) / 2;
    m.canonicalize();
    return m;
  }
};

/// Closed-or-open interval of [0,1] carried by its endpoints; openness is a
/// convention of the caller. An interval with lo > hi is empty.
template <typename Scalar>
struct Interval {
  Scalar lo{};
  Scalar hi{};

  bool empty() const { return hi < lo; }
  /// True when the interior is non-empty (up to tolerance for doubles).
  bool has_interior() const { return ScalarTraits<Scalar>::positive_gap(lo, hi); }
  Scalar length() const { return empty() ? Scalar(0) : Scalar(hi - lo); }
  bool contains(const Scalar& x) const { return !(x < lo) && !(hi < x); }
  bool contains(const Interval& o) const { return !(o.lo < lo) && !(hi < o.hi); }
  bool same_as(const Interval& o) const {
    return ScalarTraits<Scalar>::equal(lo, o.lo) && ScalarTraits<Scalar>::equal(hi, o.hi);
  }
};

template <typename Scalar>
Interval<Scalar> intersect(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  return {a.lo < b.lo ? b.lo : a.lo, a.hi < b.hi ? a.hi : b.hi};
}

template <typename Scalar>
Interval<Scalar> hull_of(const Scalar& a, const Scalar& b) {
  return b < a ? Interval<Scalar>{b, a} : Interval<Scalar>{a, b};
}

template <typename Scalar>
Interval<double> to_double(const Interval<Scalar>& iv) {
  return {ScalarTraits<Scalar>::to_double(iv.lo), ScalarTraits<Scalar>::to_double(iv.hi)};
}

}  // namespace hofent
