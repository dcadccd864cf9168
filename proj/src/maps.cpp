#include "hofent/maps.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>

#include "hofent/error.hpp"

namespace hofent {

namespace {

constexpr double kContinuityTol = 1e-9;
constexpr double kFlatDerivative = 1e-13;

double falling_factorial(int i, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= static_cast<double>(i - j);
  return r;
}

std::vector<double> differentiate(const std::vector<double>& c, int order) {
  if (order >= static_cast<int>(c.size())) return {0.0};
  std::vector<double> d(c.size() - order);
  for (std::size_t i = order; i < c.size(); ++i) d[i - order] = c[i] * falling_factorial(int(i), order);
  return d;
}

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

int sign_of(double v) { return (v > 0) - (v < 0); }

}  // namespace

// ---------------------------------------------------------------- branches

std::vector<double> Branch::derivative_zeros(double lo, double hi) const {
  std::vector<double> zeros;
  const std::size_t n = std::max<std::size_t>(resolution(), 8);
  const double h = (hi - lo) / static_cast<double>(n);
  std::vector<double> d(n + 1);
  for (std::size_t j = 0; j <= n; ++j) d[j] = derivative(lo + h * double(j), 1);

  std::size_t flat_run = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    flat_run = std::abs(d[j]) < kFlatDerivative ? flat_run + 1 : 0;
    if (flat_run >= 3)
      throw RepresentationError("derivative vanishes on a subinterval of a non-constant piece");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0 && d[j] == 0.0) {
      zeros.push_back(lo + h * double(j));
      continue;
    }
    if (sign_of(d[j]) * sign_of(d[j + 1]) < 0) {
      double a = lo + h * double(j), b = a + h;
      const int sa = sign_of(d[j]);
      while (b - a > kRootTol) {
        double m = 0.5 * (a + b);
        if (sign_of(derivative(m, 1)) == sa) a = m; else b = m;
      }
      zeros.push_back(0.5 * (a + b));
    }
  }
  return zeros;
}

PolynomialBranch::PolynomialBranch(std::vector<double> coeffs, double center)
    : coeffs_(std::move(coeffs)), center_(center) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double PolynomialBranch::value(double x) const { return horner(coeffs_, x - center_); }

double PolynomialBranch::derivative(double x, int order) const {
  return horner(differentiate(coeffs_, order), x - center_);
}

bool PolynomialBranch::is_constant() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double c) { return c == 0.0; });
}

std::vector<double> PolynomialBranch::derivative_zeros(double lo, double hi) const {
  if (is_constant()) return {};
  auto d = differentiate(coeffs_, 1);
  const double margin = 1e-9;
  std::vector<double> out;
  for (double t : polynomial_real_roots(d, lo - center_ + margin, hi - center_ - margin))
    out.push_back(t + center_);
  return out;
}

std::vector<double> polynomial_real_roots(const std::vector<double>& coeffs, double lo, double hi) {
  std::vector<double> c = coeffs;
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};
  while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
  const int deg = static_cast<int>(c.size()) - 1;
  std::vector<double> roots;
  if (deg <= 0) return roots;
  if (deg == 1) {
    roots.push_back(-c[0] / c[1]);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    auto d = differentiate(c, 1);
    for (int i = 0; i < deg; ++i) {
      std::complex<double> z = solver.eigenvalues()[i];
      if (std::abs(z.imag()) > 1e-4 * (1.0 + std::abs(z))) continue;
      double t = z.real();
      for (int it = 0; it < 8; ++it) {
        double dv = horner(d, t);
        if (dv == 0.0) break;
        double step = horner(c, t) / dv;
        if (!std::isfinite(step) || std::abs(step) > 1e-3 * (1.0 + std::abs(t))) break;
        t -= step;
      }
      double residual = std::abs(horner(c, t));
      double mag = 0.0, tp = 1.0;
      for (double ci : c) { mag += std::abs(ci) * tp; tp *= std::abs(t); }
      if (residual > 1e-8 * mag) continue;
      roots.push_back(t);
    }
  }
  std::vector<double> inside;
  for (double t : roots)
    if (t >= lo && t <= hi) inside.push_back(t);
  std::sort(inside.begin(), inside.end());
  std::vector<double> unique;
  for (double t : inside)
    if (unique.empty() || t - unique.back() > 1e-6) unique.push_back(t);
  return unique;
}

std::vector<double> hermite_interpolant(double x0, const std::vector<double>& at0, double x1,
                                        const std::vector<double>& at1) {
  const int m = static_cast<int>(at0.size());
  if (m == 0 || at1.size() != at0.size()) throw InvalidArgument("hermite: mismatched conditions");
  const int n = 2 * m;
  const double h = x1 - x0;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b(n);
  for (int k = 0; k < m; ++k) {
    A(k, k) = falling_factorial(k, k);
    b(k) = at0[k];
    for (int i = k; i < n; ++i) A(m + k, i) = falling_factorial(i, k) * std::pow(h, i - k);
    b(m + k) = at1[k];
  }
  Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
  return {sol.data(), sol.data() + n};
}

// ---------------------------------------------------------------- map

IntervalMap::IntervalMap(std::vector<Piece> pieces, double smoothness, std::string name)
    : pieces_(std::move(pieces)), smoothness_(smoothness), name_(std::move(name)) {
  validate();
}

IntervalMap IntervalMap::piecewise_linear(std::vector<LinearPiece> pieces, double smoothness,
                                          std::string name) {
  if (pieces.empty()) throw InvalidArgument("piecewise-linear map needs at least one piece");
  // gmp arithmetic assumes canonical operands; callers may pass e.g. 14/10.
  for (auto& p : pieces)
    for (Rational* q : {&p.lo, &p.hi, &p.intercept, &p.slope}) q->canonicalize();
  if (pieces.front().lo != 0 || pieces.back().hi != 1)
    throw InvalidArgument("pieces must cover [0,1]");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (!(p.lo < p.hi)) throw InvalidArgument("piece with empty interval");
    if (i + 1 < pieces.size()) {
      const auto& q = pieces[i + 1];
      if (p.hi != q.lo) throw InvalidArgument("pieces must be contiguous");
      if (p.intercept + p.slope * p.hi != q.intercept + q.slope * q.lo)
        throw InvalidArgument("piecewise-linear map is discontinuous at " + to_string(p.hi));
    }
    for (const Rational& x : {p.lo, p.hi}) {
      Rational y = p.intercept + p.slope * x;
      if (y < 0 || y > 1) throw InvalidArgument("map leaves [0,1] at x=" + to_string(x));
    }
  }
  std::vector<Piece> float_pieces;
  for (const auto& p : pieces) {
    float_pieces.push_back({p.lo.get_d(), p.hi.get_d(),
                            std::make_shared<PolynomialBranch>(
                                std::vector<double>{p.intercept.get_d(), p.slope.get_d()})});
  }
  IntervalMap m(std::move(float_pieces), smoothness, std::move(name));
  m.linear_ = std::move(pieces);
  return m;
}

IntervalMap IntervalMap::from_knots(const std::vector<std::pair<Rational, Rational>>& knots,
                                    double smoothness, std::string name) {
  if (knots.size() < 2) throw InvalidArgument("need at least two knots");
  std::vector<LinearPiece> pieces;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const auto& [x0, y0] = knots[i];
    const auto& [x1, y1] = knots[i + 1];
    if (!(x0 < x1)) throw InvalidArgument("knots must be strictly increasing");
    Rational slope = (y1 - y0) / (x1 - x0);
    slope.canonicalize();
    Rational intercept = y0 - slope * x0;
    intercept.canonicalize();
    pieces.push_back({x0, x1, intercept, slope});
  }
  return piecewise_linear(std::move(pieces), smoothness, std::move(name));
}

void IntervalMap::validate() const {
  if (pieces_.empty()) throw InvalidArgument("map needs at least one piece");
  if (std::abs(pieces_.front().lo) > 1e-15 || std::abs(pieces_.back().hi - 1.0) > 1e-15)
    throw InvalidArgument("pieces must cover [0,1]");
  if (!(smoothness_ >= 1.0)) throw InvalidArgument("smoothness order r must be >= 1");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!p.fn) throw InvalidArgument("piece without branch function");
    if (!(p.lo < p.hi)) throw InvalidArgument("piece with empty interval");
    if (i + 1 < pieces_.size()) {
      const auto& q = pieces_[i + 1];
      if (std::abs(p.hi - q.lo) > 1e-12) throw InvalidArgument("pieces must be contiguous");
      if (std::abs(p.fn->value(p.hi) - q.fn->value(q.lo)) > kContinuityTol)
        throw InvalidArgument("map is discontinuous at x=" + std::to_string(p.hi));
    }
    for (int j = 0; j <= 16; ++j) {
      double x = p.lo + (p.hi - p.lo) * j / 16.0;
      double y = p.fn->value(x);
      if (!(y >= -kContinuityTol && y <= 1.0 + kContinuityTol))
        throw InvalidArgument("map leaves [0,1] near x=" + std::to_string(x));
    }
  }
}

int IntervalMap::max_derivative_order() const {
  if (!std::isfinite(smoothness_) || smoothness_ >= double(INT_MAX)) return INT_MAX;
  return static_cast<int>(std::floor(smoothness_));
}

std::size_t IntervalMap::piece_at(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("x outside [0,1]: " + std::to_string(x));
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Piece& p) { return v < p.hi; });
  if (it == pieces_.end()) return pieces_.size() - 1;
  return static_cast<std::size_t>(it - pieces_.begin());
}

std::size_t IntervalMap::linear_piece_at(const Rational& x) const {
  if (x < 0 || x > 1) throw DomainError("x outside [0,1]: " + to_string(x));
  auto it = std::upper_bound(linear_.begin(), linear_.end(), x,
                             [](const Rational& v, const LinearPiece& p) { return v < p.hi; });
  if (it == linear_.end()) return linear_.size() - 1;
  return static_cast<std::size_t>(it - linear_.begin());
}

double eval(const IntervalMap& map, double x) {
  const auto& p = map.pieces()[map.piece_at(x)];
  return std::clamp(p.fn->value(x), 0.0, 1.0);
}

Rational eval(const IntervalMap& map, const Rational& x) {
  if (!map.exact()) throw RepresentationError("exact evaluation needs a rational piecewise-linear map");
  const auto& p = map.linear_pieces()[map.linear_piece_at(x)];
  Rational y = p.intercept + p.slope * x;
  y.canonicalize();
  return y;
}

double deriv(const IntervalMap& map, double x, int order) {
  if (order < 1) throw InvalidArgument("derivative order must be >= 1");
  if (order > map.max_derivative_order())
    throw UnsupportedOrderError("derivative order " + std::to_string(order) + " exceeds floor(r)");
  const auto& p = map.pieces()[map.piece_at(x)];
  return p.fn->derivative(x, order);
}

double left_deriv(const IntervalMap& map, double x, int order) {
  if (order > map.max_derivative_order())
    throw UnsupportedOrderError("derivative order exceeds floor(r)");
  if (!(x > 0.0 && x <= 1.0)) return deriv(map, x, order);
  const auto& ps = map.pieces();
  auto it = std::lower_bound(ps.begin(), ps.end(), x,
                             [](const Piece& p, double v) { return p.hi < v; });
  if (it == ps.end()) --it;
  return it->fn->derivative(x, order);
}

// ---------------------------------------------------------------- critical set

template <typename Scalar>
bool CriticalSet<Scalar>::contains(const Scalar& x) const {
  for (const auto& p : points)
    if (ScalarTraits<Scalar>::equal(p, x)) return true;
  for (const auto& iv : intervals)
    if (!ScalarTraits<Scalar>::less(x, iv.lo) && !ScalarTraits<Scalar>::less(iv.hi, x)) return true;
  return false;
}

namespace {

template <typename Scalar>
CriticalSet<Scalar> normalize(std::vector<Scalar> points, std::vector<Interval<Scalar>> intervals) {
  using T = ScalarTraits<Scalar>;
  std::sort(intervals.begin(), intervals.end(),
            [](const auto& a, const auto& b) { return a.lo < b.lo; });
  CriticalSet<Scalar> out;
  for (const auto& iv : intervals) {
    if (!out.intervals.empty() && !T::less(out.intervals.back().hi, iv.lo)) {
      if (out.intervals.back().hi < iv.hi) out.intervals.back().hi = iv.hi;
    } else {
      out.intervals.push_back(iv);
    }
  }
  std::sort(points.begin(), points.end());
  for (const auto& p : points) {
    bool covered = false;
    for (const auto& iv : out.intervals)
      if (!T::less(p, iv.lo) && !T::less(iv.hi, p)) covered = true;
    if (covered) continue;
    if (!out.points.empty() && T::equal(out.points.back(), p)) continue;
    out.points.push_back(p);
  }
  return out;
}

CriticalSet<Rational> exact_critical_set(const IntervalMap& map) {
  const auto& lp = map.linear_pieces();
  std::vector<Rational> points;
  std::vector<Interval<Rational>> intervals;
  for (std::size_t i = 0; i < lp.size(); ++i) {
    if (sgn(lp[i].slope) == 0) intervals.push_back({lp[i].lo, lp[i].hi});
    if (i + 1 < lp.size()) {
      int a = sgn(lp[i].slope), b = sgn(lp[i + 1].slope);
      if (a != 0 && b != 0 && a != b) points.push_back(lp[i].hi);
    }
  }
  return normalize(std::move(points), std::move(intervals));
}

CriticalSet<double> float_critical_set(const IntervalMap& map) {
  if (map.exact()) {
    auto ex = exact_critical_set(map);
    CriticalSet<double> out;
    for (const auto& p : ex.points) out.points.push_back(p.get_d());
    for (const auto& iv : ex.intervals) out.intervals.push_back(to_double(iv));
    return out;
  }
  std::vector<double> points;
  std::vector<Interval<double>> intervals;
  const auto& ps = map.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& p = ps[i];
    if (p.fn->is_constant()) {
      intervals.push_back({p.lo, p.hi});
      continue;
    }
    for (double z : p.fn->derivative_zeros(p.lo, p.hi)) points.push_back(z);
    if (i == 0 && std::abs(p.fn->derivative(p.lo, 1)) < kFlatDerivative) points.push_back(0.0);
    if (i + 1 == ps.size() && std::abs(p.fn->derivative(p.hi, 1)) < kFlatDerivative)
      points.push_back(1.0);
    if (i + 1 < ps.size()) {
      const auto& q = ps[i + 1];
      if (q.fn->is_constant()) continue;
      double dl = p.fn->derivative(p.hi, 1), dr = q.fn->derivative(q.lo, 1);
      bool flat = std::abs(dl) < kFlatDerivative || std::abs(dr) < kFlatDerivative;
      if (flat || sign_of(dl) != sign_of(dr)) points.push_back(p.hi);
    }
  }
  return normalize(std::move(points), std::move(intervals));
}

}  // namespace

template <>
CriticalSet<double> critical_set<double>(const IntervalMap& map) {
  return float_critical_set(map);
}

template <>
CriticalSet<Rational> critical_set<Rational>(const IntervalMap& map) {
  if (!map.exact()) throw RepresentationError("exact critical set needs a rational piecewise-linear map");
  return exact_critical_set(map);
}

// ---------------------------------------------------------------- partition

template <typename Scalar>
int NaturalPartition<Scalar>::find(const Scalar& x) const {
  auto it = std::upper_bound(branches.begin(), branches.end(), x,
                             [](const Scalar& v, const Interval<Scalar>& b) { return v < b.hi; });
  if (it == branches.end() || !(it->lo < x)) return -1;
  return static_cast<int>(it - branches.begin());
}

template <typename Scalar>
NaturalPartition<Scalar> natural_partition(const IntervalMap& map) {
  using T = ScalarTraits<Scalar>;
  auto crit = critical_set<Scalar>(map);
  std::vector<Interval<Scalar>> obstacles = crit.intervals;
  for (const auto& p : crit.points) obstacles.push_back({p, p});
  std::sort(obstacles.begin(), obstacles.end(),
            [](const auto& a, const auto& b) { return a.lo < b.lo; });

  NaturalPartition<Scalar> part;
  Scalar cursor(0);
  auto close_gap = [&](const Scalar& end) {
    Interval<Scalar> gap{cursor, end};
    if (!gap.has_interior()) return;
    Scalar a = eval(map, gap.lo), b = eval(map, gap.hi);
    if (a == b) {
      // Below double resolution the gap is numerically flat.
      if constexpr (!T::exact) return;
      throw RepresentationError("monotone branch with constant values");
    }
    part.branches.push_back(gap);
    part.direction.push_back(a < b ? 1 : -1);
  };
  for (const auto& ob : obstacles) {
    close_gap(ob.lo);
    if (cursor < ob.hi) cursor = ob.hi;
  }
  close_gap(Scalar(1));
  if (part.branches.size() > 100000)
    throw ResolutionError("too many critical components to form a finite partition");
  return part;
}

template struct CriticalSet<double>;
template struct CriticalSet<Rational>;
template struct NaturalPartition<double>;
template struct NaturalPartition<Rational>;
template NaturalPartition<double> natural_partition<double>(const IntervalMap&);
template NaturalPartition<Rational> natural_partition<Rational>(const IntervalMap&);

template <typename Scalar>
Interval<Scalar> branch_image(const IntervalMap& map, const Interval<Scalar>& part) {
  return hull_of<Scalar>(eval(map, part.lo), eval(map, part.hi));
}

template Interval<double> branch_image(const IntervalMap&, const Interval<double>&);
template Interval<Rational> branch_image(const IntervalMap&, const Interval<Rational>&);

template <>
Rational branch_preimage<Rational>(const IntervalMap& map, const Interval<Rational>& branch,
                                   int /*direction*/, const Rational& y) {
  if (!map.exact()) throw RepresentationError("exact preimage needs a rational piecewise-linear map");
  for (const auto& p : map.linear_pieces()) {
    if (!(p.hi > branch.lo && p.lo < branch.hi)) continue;
    Rational lo = p.lo < branch.lo ? branch.lo : p.lo;
    Rational hi = p.hi > branch.hi ? branch.hi : p.hi;
    Rational v0 = p.intercept + p.slope * lo, v1 = p.intercept + p.slope * hi;
    auto iv = hull_of(v0, v1);
    if (!iv.contains(y)) continue;
    if (sgn(p.slope) == 0) return lo;
    Rational x = (y - p.intercept) / p.slope;
    x.canonicalize();
    return x;
  }
  throw DomainError("value " + to_string(y) + " not in the image of the branch");
}

template <>
double branch_preimage<double>(const IntervalMap& map, const Interval<double>& branch,
                               int direction, const double& y) {
  double a = branch.lo, b = branch.hi;
  double fa = eval(map, a), fb = eval(map, b);
  double target = std::clamp(y, std::min(fa, fb), std::max(fa, fb));
  if (target == fa) return a;
  if (target == fb) return b;
  for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
    double m = 0.5 * (a + b);
    double fm = eval(map, m);
    if ((fm - target) * direction < 0) a = m; else b = m;
  }
  return 0.5 * (a + b);
}

// ---------------------------------------------------------------- laps

namespace {

template <typename Scalar>
class LapCounter {
 public:
  LapCounter(const IntervalMap& map, std::size_t budget)
      : map_(map), part_(natural_partition<Scalar>(map)), budget_(budget) {}

  BigInt count(int n) {
    if (part_.size() == 0) return 1;
    const Interval<Scalar> unit{Scalar(0), Scalar(1)};
    if (alternating()) {
      memo_.assign(static_cast<std::size_t>(n) + 1, {});
      return leaves(unit, n);
    }
    runs_ = 0;
    last_ = 0;
    ordered(unit, 1, n);
    return runs_ == 0 ? BigInt(1) : BigInt(static_cast<unsigned long>(runs_));
  }

 private:
  bool alternating() const {
    for (std::size_t i = 0; i + 1 < part_.size(); ++i) {
      if (!ScalarTraits<Scalar>::equal(part_.branches[i].hi, part_.branches[i + 1].lo)) return false;
      if (part_.direction[i] == part_.direction[i + 1]) return false;
    }
    return true;
  }

  template <typename Fn>
  void for_each_branch(const Interval<Scalar>& image, bool reversed, Fn&& fn) {
    auto first = std::upper_bound(
        part_.branches.begin(), part_.branches.end(), image.lo,
        [](const Scalar& v, const Interval<Scalar>& b) { return v < b.hi; });
    std::vector<std::size_t> hits;
    for (auto it = first; it != part_.branches.end() && it->lo < image.hi; ++it) {
      if (intersect(image, *it).has_interior()) hits.push_back(std::size_t(it - part_.branches.begin()));
    }
    if (reversed) std::reverse(hits.begin(), hits.end());
    for (std::size_t b : hits) fn(b, branch_image(map_, intersect(image, part_.branches[b])));
  }

  void tick() {
    if (++nodes_ > budget_) throw BudgetError("lap enumeration exceeded the combinatorial budget");
  }

  BigInt leaves(const Interval<Scalar>& image, int depth) {
    if (depth == 0) return 1;
    auto& table = memo_[static_cast<std::size_t>(depth)];
    auto key = std::make_pair(image.lo, image.hi);
    if (auto it = table.find(key); it != table.end()) return it->second;
    tick();
    BigInt total = 0;
    for_each_branch(image, false, [&](std::size_t, const Interval<Scalar>& next) {
      if (next.has_interior()) total += leaves(next, depth - 1);
    });
    table.emplace(std::move(key), total);
    return total;
  }

  void ordered(const Interval<Scalar>& image, int dir, int depth) {
    if (depth == 0) {
      if (dir != last_) {
        ++runs_;
        last_ = dir;
      }
      return;
    }
    tick();
    for_each_branch(image, dir < 0, [&](std::size_t b, const Interval<Scalar>& next) {
      if (next.has_interior()) ordered(next, dir * part_.direction[b], depth - 1);
    });
  }

  const IntervalMap& map_;
  NaturalPartition<Scalar> part_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::vector<std::map<std::pair<Scalar, Scalar>, BigInt>> memo_;
  std::size_t runs_ = 0;
  int last_ = 0;
};

}  // namespace

BigInt lap_count(const IntervalMap& map, int n, std::size_t budget) {
  if (n < 1) throw InvalidArgument("lap_count needs n >= 1");
  if (map.exact()) return LapCounter<Rational>(map, budget).count(n);
  return LapCounter<double>(map, budget).count(n);
}

// ---------------------------------------------------------------- derivative norms

double sup_abs_derivative(const IntervalMap& map, const Interval<double>& where, int order) {
  double best = 0.0;
  for (const auto& p : map.pieces()) {
    double lo = std::max(p.lo, where.lo), hi = std::min(p.hi, where.hi);
    if (!(lo < hi)) continue;
    if (const auto* c = p.fn->polynomial()) {
      auto d = differentiate(*c, order);
      auto dd = differentiate(d, 1);
      best = std::max({best, std::abs(horner(d, lo - p.fn->center())),
                       std::abs(horner(d, hi - p.fn->center()))});
      for (double t : polynomial_real_roots(dd, lo - p.fn->center(), hi - p.fn->center()))
        best = std::max(best, std::abs(horner(d, t)));
      continue;
    }
    const std::size_t n = std::max<std::size_t>(p.fn->resolution(), 64);
    for (std::size_t j = 0; j <= n; ++j) {
      double x = lo + (hi - lo) * double(j) / double(n);
      best = std::max(best, std::abs(p.fn->derivative(x, order)));
    }
  }
  return best;
}

namespace {

Rational exact_sup_norm(const IntervalMap& map, int n) {
  const auto& lp = map.linear_pieces();
  std::vector<std::map<std::pair<Rational, Rational>, Rational>> memo(std::size_t(n) + 1);
  std::function<Rational(const Interval<Rational>&, int)> best =
      [&](const Interval<Rational>& image, int depth) -> Rational {
    if (depth == 0) return 1;
    auto key = std::make_pair(image.lo, image.hi);
    auto& table = memo[std::size_t(depth)];
    if (auto it = table.find(key); it != table.end()) return it->second;
    Rational out = 0;
    for (const auto& p : lp) {
      Interval<Rational> part = intersect(image, Interval<Rational>{p.lo, p.hi});
      if (!part.has_interior()) continue;
      Rational s = abs(p.slope);
      if (sgn(s) == 0) continue;
      auto next = hull_of<Rational>(p.intercept + p.slope * part.lo, p.intercept + p.slope * part.hi);
      next.lo.canonicalize();
      next.hi.canonicalize();
      Rational v = s * best(next, depth - 1);
      if (v > out) out = v;
    }
    table.emplace(std::move(key), out);
    return out;
  };
  return best({0, 1}, n);
}

}  // namespace

double sup_deriv_norm(const IntervalMap& map, int n) {
  if (n < 1) throw InvalidArgument("sup_deriv_norm needs n >= 1");
  if (map.exact()) return exact_sup_norm(map, n).get_d();
  if (n == 1) return sup_abs_derivative(map, {0.0, 1.0}, 1);
  // Products of per-cell sups of |f'| along chains of cells, each cell
  // followed by the cells its image meets. Pointwise grid sampling misses the
  // peaks of |(f^n)'| (their width shrinks like the inverse of the peak), the
  // chain bound cannot: every orbit is such a chain.
  constexpr int kCells = 20000;
  const double h = 1.0 / kCells;
  auto crit = critical_set<double>(map);
  std::vector<double> slope(kCells);
  std::vector<std::pair<int, int>> reach(kCells);
  for (int j = 0; j < kCells; ++j) {
    double lo = j * h, hi = (j + 1) * h, mid = 0.5 * (lo + hi);
    slope[j] = std::max({std::abs(deriv(map, lo, 1)), std::abs(deriv(map, mid, 1)),
                         std::abs(left_deriv(map, hi, 1))});
    double ylo = std::min({eval(map, lo), eval(map, mid), eval(map, hi)});
    double yhi = std::max({eval(map, lo), eval(map, mid), eval(map, hi)});
    for (double c : crit.points)
      if (c > lo && c < hi) {
        ylo = std::min(ylo, eval(map, c));
        yhi = std::max(yhi, eval(map, c));
      }
    auto cell = [&](double y) { return std::clamp(static_cast<int>(y / h), 0, kCells - 1); };
    reach[j] = {cell(ylo), cell(yhi)};
  }
  std::vector<double> bound(kCells, 1.0), next(kCells);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < kCells; ++j) {
      double m = 0.0;
      for (int i = reach[j].first; i <= reach[j].second; ++i) m = std::max(m, bound[i]);
      next[j] = slope[j] * m;
    }
    bound.swap(next);
  }
  return *std::max_element(bound.begin(), bound.end());
}

Orbit orbit(const IntervalMap& map, double x, int n) {
  Orbit o;
  o.points.push_back(x);
  o.derivative_products.push_back(1.0);
  for (int k = 0; k < n; ++k) {
    double d = std::abs(deriv(map, x, 1));
    x = eval(map, x);
    o.points.push_back(x);
    o.derivative_products.push_back(o.derivative_products.back() * d);
  }
  return o;
}

}  // namespace hofent
