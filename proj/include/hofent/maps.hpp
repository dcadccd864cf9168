#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hofent/scalar.hpp"

namespace hofent {

/// A smooth function living on one piece of an interval map.
class Branch {
 public:
  virtual ~Branch() = default;

  virtual double value(double x) const = 0;
  /// Derivative of the given order (>= 1).
  virtual double derivative(double x, int order) const = 0;

  /// Zeros of the first derivative strictly inside (lo, hi). The default
  /// samples f' on `resolution()` cells and bisects sign changes.
  virtual std::vector<double> derivative_zeros(double lo, double hi) const;

  virtual bool is_constant() const { return false; }
  /// Monomial coefficients in (x - center) if the branch is a polynomial.
  virtual const std::vector<double>* polynomial() const { return nullptr; }
  virtual double center() const { return 0.0; }
  virtual std::size_t resolution() const { return 4096; }
};

class PolynomialBranch final : public Branch {
 public:
  explicit PolynomialBranch(std::vector<double> coeffs, double center = 0.0);

  double value(double x) const override;
  double derivative(double x, int order) const override;
  std::vector<double> derivative_zeros(double lo, double hi) const override;
  bool is_constant() const override;
  const std::vector<double>* polynomial() const override { return &coeffs_; }
  double center() const override { return center_; }

 private:
  std::vector<double> coeffs_;
  double center_;
};

/// Branch given by a callable `f(x, order)`; order 0 is the value.
class FunctionBranch final : public Branch {
 public:
  using Fn = std::function<double(double, int)>;
  explicit FunctionBranch(Fn fn, std::size_t resolution = 4096)
      : fn_(std::move(fn)), resolution_(resolution) {}

  double value(double x) const override { return fn_(x, 0); }
  double derivative(double x, int order) const override { return fn_(x, order); }
  std::size_t resolution() const override { return resolution_; }

 private:
  Fn fn_;
  std::size_t resolution_;
};

struct Piece {
  double lo = 0.0;
  double hi = 1.0;
  std::shared_ptr<const Branch> fn;
};

/// Affine piece `intercept + slope * x` on [lo, hi], in exact arithmetic.
struct LinearPiece {
  Rational lo, hi, intercept, slope;
};

/// Continuous self-map of [0,1] made of finitely many smooth pieces.
///
/// Pieces are the smoothness pieces; monotone laps are derived from the
/// critical set (see `natural_partition`). Piecewise-linear maps with
/// rational data additionally carry an exact representation and every
/// templated algorithm can then run over `Rational`.
class IntervalMap {
 public:
  IntervalMap(std::vector<Piece> pieces, double smoothness, std::string name);

  static IntervalMap piecewise_linear(std::vector<LinearPiece> pieces, double smoothness,
                                      std::string name);
  /// Continuous piecewise-linear map through the given (x, y) knots.
  static IntervalMap from_knots(const std::vector<std::pair<Rational, Rational>>& knots,
                                double smoothness, std::string name);

  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<LinearPiece>& linear_pieces() const { return linear_; }
  bool exact() const { return !linear_.empty(); }
  double smoothness() const { return smoothness_; }
  const std::string& name() const { return name_; }
  /// floor(r), or INT_MAX for C-infinity maps.
  int max_derivative_order() const;

  /// Index of the piece containing x; at a shared breakpoint the right piece.
  std::size_t piece_at(double x) const;
  std::size_t linear_piece_at(const Rational& x) const;

 private:
  void validate() const;

  std::vector<Piece> pieces_;
  std::vector<LinearPiece> linear_;
  double smoothness_;
  std::string name_;
};

double eval(const IntervalMap& map, double x);
Rational eval(const IntervalMap& map, const Rational& x);

/// Derivative of the containing piece; right derivative at breakpoints
/// (left derivative at x = 1).
double deriv(const IntervalMap& map, double x, int order);
double left_deriv(const IntervalMap& map, double x, int order);

template <typename Scalar>
struct CriticalSet {
  std::vector<Scalar> points;
  std::vector<Interval<Scalar>> intervals;  // closed flat intervals

  bool empty() const { return points.empty() && intervals.empty(); }
  bool contains(const Scalar& x) const;
};

template <typename Scalar>
CriticalSet<Scalar> critical_set(const IntervalMap& map);

/// Critical monotone branches (open intervals) with their monotonicity
/// direction (+1 increasing, -1 decreasing).
template <typename Scalar>
struct NaturalPartition {
  std::vector<Interval<Scalar>> branches;
  std::vector<int> direction;

  std::size_t size() const { return branches.size(); }
  /// Index of the branch whose interior contains x, or -1.
  int find(const Scalar& x) const;
};

template <typename Scalar>
NaturalPartition<Scalar> natural_partition(const IntervalMap& map);

/// Image of a subinterval of one monotone branch: hull of endpoint values.
template <typename Scalar>
Interval<Scalar> branch_image(const IntervalMap& map, const Interval<Scalar>& part);

/// x in `branch` with f(x) = y, for y in the closure of f(branch).
template <typename Scalar>
Scalar branch_preimage(const IntervalMap& map, const Interval<Scalar>& branch, int direction,
                       const Scalar& y);

inline constexpr std::size_t kDefaultLapBudget = std::size_t{1} << 24;

/// Number of maximal intervals of monotonicity of f^n.
BigInt lap_count(const IntervalMap& map, int n, std::size_t budget = kDefaultLapBudget);

/// Upper estimate of sup |(f^n)'| (exact for piecewise-linear maps).
double sup_deriv_norm(const IntervalMap& map, int n);

/// sup |f'| over the interval (per-piece exact maxima for polynomials).
double sup_abs_derivative(const IntervalMap& map, const Interval<double>& where, int order = 1);

struct Orbit {
  std::vector<double> points;
  std::vector<double> derivative_products;  // |(f^k)'(x0)|, k = 0..n
};

Orbit orbit(const IntervalMap& map, double x, int n);

/// Real roots of sum c_i t^i inside [lo, hi] (companion matrix, Newton polish).
std::vector<double> polynomial_real_roots(const std::vector<double>& coeffs, double lo, double hi);

/// Coefficients in t = x - x0 of the degree-(2m-1) Hermite interpolant
/// matching value and derivatives 1..m-1 at x0 and x1.
std::vector<double> hermite_interpolant(double x0, const std::vector<double>& at0, double x1,
                                        const std::vector<double>& at1);

}  // namespace hofent
