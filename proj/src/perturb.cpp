#include "hofent/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hofent/error.hpp"
#include "hofent/graphs.hpp"

namespace hofent {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * double(i);
  return d;
}

double poly_eval(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

// t^(m+1) * sum_k C(m+k,k) (1-t)^k: 0 at 0, 1 at 1, derivatives 1..m vanish at both ends.
std::vector<std::vector<double>> smoothstep_derivatives(int m, int max_order) {
  std::vector<double> c(2 * m + 2, 0.0);
  for (int k = 0; k <= m; ++k) {
    double w = binomial(m + k, k);
    for (int j = 0; j <= k; ++j) c[m + 1 + j] += w * binomial(k, j) * ((j % 2) ? -1.0 : 1.0);
  }
  std::vector<std::vector<double>> out{c};
  for (int k = 1; k <= max_order; ++k) out.push_back(poly_derivative(out.back()));
  return out;
}

/// f + beta (s - f) with s(x) = level + a sin(N x / delta) and beta the
/// window cutoff.
class SinusoidBranch final : public Branch {
 public:
  SinusoidBranch(std::shared_ptr<const Branch> base, double center, double delta, double level,
                 double amplitude, double frequency, int order)
      : base_(std::move(base)),
        center_(center),
        delta_(delta),
        blend_(delta / 10.0),
        level_(level),
        a_(amplitude),
        omega_(frequency / delta),
        step_(smoothstep_derivatives(std::max(order, 1), kMaxOrder)) {}

  double value(double x) const override { return derivative(x, 0); }

  double derivative(double x, int order) const override {
    if (order > kMaxOrder) throw UnsupportedOrderError("perturbation derivative order too high");
    double total = order == 0 ? base_->value(x) : base_->derivative(x, order);
    for (int j = 0; j <= order; ++j) {
      double b = cutoff(x, j);
      if (b == 0.0) continue;
      int k = order - j;
      double s = a_ * std::pow(omega_, k) * std::sin(omega_ * x + k * std::numbers::pi / 2);
      if (k == 0) s += level_;
      double f = k == 0 ? base_->value(x) : base_->derivative(x, k);
      total += binomial(order, j) * b * (s - f);
    }
    return total;
  }

  std::vector<double> derivative_zeros(double lo, double hi) const override {
    std::vector<double> zeros;
    const double wlo = center_ - delta_, whi = center_ + delta_;
    // Window: zeros of cos(omega x).
    double from = std::max(lo, wlo), to = std::min(hi, whi);
    if (from < to) {
      long k0 = long(std::ceil((from * omega_ - std::numbers::pi / 2) / std::numbers::pi));
      for (long k = k0;; ++k) {
        double x = (std::numbers::pi / 2 + double(k) * std::numbers::pi) / omega_;
        if (x >= to) break;
        if (x > from) zeros.push_back(x);
      }
    }
    // Blends: sign changes on a fine grid.
    auto scan = [&](double a, double b) {
      a = std::max(a, lo);
      b = std::min(b, hi);
      if (!(a < b)) return;
      const std::size_t cells = std::max<std::size_t>(4096, std::size_t(8 * omega_ * blend_));
      const double h = (b - a) / double(cells);
      double prev = derivative(a, 1);
      for (std::size_t j = 1; j <= cells; ++j) {
        double x = a + h * double(j), d = derivative(x, 1);
        if (prev != 0.0 && d != 0.0 && (prev > 0) != (d > 0)) {
          double u = x - h, v = x;
          const bool up = prev > 0;
          for (int it = 0; it < 100 && v - u > 1e-15; ++it) {
            double m = 0.5 * (u + v);
            if ((derivative(m, 1) > 0) == up) u = m; else v = m;
          }
          zeros.push_back(0.5 * (u + v));
        }
        prev = d;
      }
    };
    scan(wlo - blend_, wlo);
    scan(whi, whi + blend_);
    std::sort(zeros.begin(), zeros.end());
    zeros.erase(std::remove_if(zeros.begin(), zeros.end(),
                               [&](double z) { return z <= lo + 1e-12 || z >= hi - 1e-12; }),
                zeros.end());
    return zeros;
  }

 private:
  static constexpr int kMaxOrder = 8;

  double cutoff(double x, int order) const {
    const double d = x - center_;
    if (std::abs(d) <= delta_) return order == 0 ? 1.0 : 0.0;
    if (std::abs(d) >= delta_ + blend_) return 0.0;
    if (std::size_t(order) >= step_.size()) return 0.0;
    double t, sign;
    if (d < 0) {
      t = (x - (center_ - delta_ - blend_)) / blend_;
      sign = 1.0;
    } else {
      t = ((center_ + delta_ + blend_) - x) / blend_;
      sign = -1.0;
    }
    return poly_eval(step_[order], t) * std::pow(sign / blend_, order);
  }

  std::shared_ptr<const Branch> base_;
  double center_, delta_, blend_, level_, a_, omega_;
  std::vector<std::vector<double>> step_;
};

double iterate(const IntervalMap& map, double x, int n) {
  for (int k = 0; k < n; ++k) x = eval(map, x);
  return x;
}

}  // namespace

// ---------------------------------------------------------------- tangency

std::optional<TangencyData> find_tangency(const IntervalMap& map, const TangencySearch& search) {
  const int order = std::min(map.max_derivative_order(), 8);
  auto crit = critical_set<double>(map);
  std::vector<double> candidates = crit.points;
  for (const auto& iv : crit.intervals) candidates.push_back(0.5 * (iv.lo + iv.hi));
  std::sort(candidates.begin(), candidates.end());

  for (double c : candidates) {
    bool flat = true;
    for (int j = 1; j <= order && flat; ++j)
      flat = std::abs(deriv(map, c, j)) < search.tol && std::abs(left_deriv(map, c, j)) < search.tol;
    if (!flat) continue;
    double y = c;
    for (int k = 1; k <= search.max_connecting_time; ++k) {
      y = eval(map, y);
      for (int T = 1; T <= search.max_period; ++T) {
        if (std::abs(iterate(map, y, T) - y) > search.tol) continue;
        double m = 1.0, z = y;
        for (int s = 0; s < T; ++s, z = eval(map, z)) m *= deriv(map, z, 1);
        if (std::abs(m) <= 1.0) continue;
        return TangencyData{c, y, T, m, k, order};
      }
    }
  }
  return std::nullopt;
}

DerivedParams derive_parameters(const TangencyData& t, const PerturbationParams& p) {
  if (p.l < 1) throw InvalidArgument("horizon l must be >= 1");
  if (!(p.delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (!(p.C > 0.0)) throw InvalidArgument("amplitude constant C must be positive");
  if (!(p.r >= 1.0)) throw InvalidArgument("r must be >= 1");
  DerivedParams d;
  const double lambda = std::abs(t.multiplier);
  d.amplitude = p.C * p.delta * std::pow(lambda, -double(p.l));
  d.frequency = long(std::floor(std::pow(std::pow(p.delta, p.r) / (d.amplitude * p.l), 1.0 / p.r)));
  d.long_horizon = p.l >= 5.0 * std::abs(std::log(p.delta));
  return d;
}

Interval<double> perturbation_window(const TangencyData& t, double delta) {
  return {t.critical_point - delta, t.critical_point + delta};
}

Interval<double> perturbation_support(const TangencyData& t, double delta) {
  return {t.critical_point - 1.1 * delta, t.critical_point + 1.1 * delta};
}

IntervalMap construct_perturbation(const IntervalMap& map, const TangencyData& t,
                                   const PerturbationParams& p) {
  auto d = derive_parameters(t, p);
  auto window = perturbation_window(t, p.delta);
  if (!(window.lo > 0.0 && window.hi < 1.0)) throw GeometryError("window leaves (0,1)");
  if (d.frequency < 2) throw InvalidArgument("derived frequency N < 2: no horseshoe");
  const double level = eval(map, t.critical_point);
  if (d.amplitude < 64 * kEps * std::max(std::abs(level), 1e-300)) {
    const double lambda = std::abs(t.multiplier);
    int safe = int(std::floor(std::log(p.C * p.delta / (64 * kEps * level)) / std::log(lambda)));
    throw PrecisionError("amplitude below double resolution; use l <= " + std::to_string(safe));
  }
  if (level + d.amplitude > 1.0 || level - d.amplitude < 0.0)
    throw GeometryError("perturbation leaves [0,1]");
  auto support = perturbation_support(t, p.delta);
  const auto& pieces = map.pieces();
  std::size_t host = pieces.size();
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (pieces[i].lo < support.lo && support.hi < pieces[i].hi) host = i;
  if (host == pieces.size()) throw GeometryError("perturbation support collides with a piece boundary");

  std::vector<Piece> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i != host) {
      out.push_back(pieces[i]);
      continue;
    }
    const auto& h = pieces[i];
    out.push_back({h.lo, support.lo, h.fn});
    out.push_back({support.lo, support.hi,
                   std::make_shared<SinusoidBranch>(h.fn, t.critical_point, p.delta, level,
                                                    d.amplitude, double(d.frequency),
                                                    int(std::floor(p.r)))});
    out.push_back({support.hi, h.hi, h.fn});
  }
  char name[128];
  std::snprintf(name, sizeof name, "%s+sin(l=%d,delta=%.12g,C=%.12g)", map.name().c_str(), p.l,
                p.delta, p.C);
  return IntervalMap(std::move(out), std::min(p.r, map.smoothness()), name);
}

double cr_distance(const IntervalMap& f, const IntervalMap& g, double r, std::size_t grid_cells,
                   const Interval<double>& where) {
  if (grid_cells == 0) throw InvalidArgument("grid must have at least one cell");
  const int order = int(std::floor(r));
  const double h = (where.hi - where.lo) / double(grid_cells);
  double best = 0.0;
  for (std::size_t j = 0; j < grid_cells; ++j) {
    double x = where.lo + h * (double(j) + 0.5);
    best = std::max(best, std::abs(eval(g, x) - eval(f, x)));
    for (int k = 1; k <= order; ++k) best = std::max(best, std::abs(deriv(g, x, k) - deriv(f, x, k)));
  }
  return best;
}

// ---------------------------------------------------------------- certificate

namespace {

struct Enclosure {
  double lo, hi;
};

// Encloses g^l at a point. Exact maps iterate in rationals; otherwise each
// step takes the hull of g over the current enclosure (endpoints and the
// critical points inside) and widens it by a rounding-error allowance.
class OrbitEncloser {
 public:
  explicit OrbitEncloser(const IntervalMap& g) : g_(g) {
    if (g.exact()) return;
    auto crit = critical_set<double>(g);
    turning_ = crit.points;
    for (const auto& iv : crit.intervals) {
      turning_.push_back(iv.lo);
      turning_.push_back(iv.hi);
    }
    std::sort(turning_.begin(), turning_.end());
  }

  // growth[k] collects |(g^k)'| along the enclosure centre, k = 1..l-1.
  Enclosure enclose(double x, int l, std::vector<double>* growth) const {
    if (g_.exact()) {
      Rational q(x);
      for (int k = 0; k < l; ++k) q = eval(g_, q);
      return {q.get_d(), q.get_d()};
    }
    Enclosure e{x, x};
    double product = 1.0;
    for (int k = 0; k < l; ++k) {
      if (k > 0 && growth) {
        product *= std::abs(deriv(g_, std::clamp(0.5 * (e.lo + e.hi), 0.0, 1.0), 1));
        (*growth)[k] = std::max((*growth)[k], product);
      }
      e = step(e);
    }
    return e;
  }

 private:
  Enclosure step(const Enclosure& e) const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, slack = 0.0;
    auto sample = [&](double x) {
      x = std::clamp(x, 0.0, 1.0);
      double v = eval(g_, x);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      slack = std::max(slack, 16 * kEps * (std::abs(v) + std::abs(x * deriv(g_, x, 1))));
    };
    sample(e.lo);
    sample(e.hi);
    auto first = std::upper_bound(turning_.begin(), turning_.end(), e.lo);
    for (auto it = first; it != turning_.end() && *it < e.hi; ++it) sample(*it);
    return {std::max(0.0, lo - slack), std::min(1.0, hi + slack)};
  }

  const IntervalMap& g_;
  std::vector<double> turning_;
};

// Points of J_j's closure lie strictly between the inner bounds of the two
// endpoint enclosures, so the intermediate value theorem gives the covering.
bool covers(const Enclosure& a, const Enclosure& b, const Interval<double>& target) {
  const Enclosure& low = a.hi <= b.hi ? a : b;
  const Enclosure& high = a.hi <= b.hi ? b : a;
  if (!(low.hi < high.lo)) return false;
  return low.hi <= target.lo && target.hi <= high.lo;
}

std::vector<Interval<double>> laps_inside(const IntervalMap& g, const Interval<double>& window) {
  std::vector<Interval<double>> laps;
  if (g.exact()) {
    for (const auto& b : natural_partition<Rational>(g).branches) {
      auto d = to_double(b);
      if (d.lo >= window.lo && d.hi <= window.hi) laps.push_back(d);
    }
    return laps;
  }
  for (const auto& b : natural_partition<double>(g).branches)
    if (b.lo >= window.lo - 1e-12 && b.hi <= window.hi + 1e-12) laps.push_back(b);
  return laps;
}

double covering_radius(const std::vector<std::vector<char>>& cover) {
  OrientedGraph graph(cover.size());
  for (std::size_t i = 0; i < cover.size(); ++i)
    for (std::size_t j = 0; j < cover.size(); ++j)
      if (cover[i][j]) graph.add_edge(int(i), int(j));
  double best = 0.0;
  for (const auto& comp : strongly_connected_components(graph))
    if (has_cycle(graph, comp)) best = std::max(best, component_spectral_radius(graph, comp));
  return best;
}

}  // namespace

HorseshoeCertificate certify_horseshoe(const IntervalMap& g, int l, const Interval<double>& window,
                                       const std::vector<Interval<double>>* candidates) {
  if (l < 1) throw InvalidArgument("horizon l must be >= 1");
  HorseshoeCertificate cert;
  cert.l = l;
  cert.intervals = candidates ? *candidates : laps_inside(g, window);
  const std::size_t m = cert.intervals.size();
  cert.covering.assign(m, std::vector<char>(m, 0));
  if (m == 0) return cert;

  OrbitEncloser encloser(g);
  std::vector<Enclosure> lo(m), hi(m);
  std::vector<double> growth(std::size_t(l), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    lo[i] = encloser.enclose(cert.intervals[i].lo, l, &growth);
    hi[i] = encloser.enclose(cert.intervals[i].hi, l, &growth);
  }
  cert.max_expansion = *std::max_element(growth.begin(), growth.end());
  if (cert.max_expansion > kExpansionGuard) {
    int safe = 1;
    while (safe < l && growth[std::size_t(safe)] <= kExpansionGuard) ++safe;
    throw HorizonError("expansion along the orbit exceeds double precision; largest safe l is " +
                       std::to_string(safe));
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) cert.covering[i][j] = covers(lo[i], hi[i], cert.intervals[j]);
  cert.spectral_radius = covering_radius(cert.covering);
  cert.entropy_bound = cert.spectral_radius > 1.0 ? std::log(cert.spectral_radius) / l : 0.0;
  return cert;
}

bool reverify_certificate(const IntervalMap& g, const HorseshoeCertificate& cert) {
  OrbitEncloser encloser(g);
  const std::size_t m = cert.intervals.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& J = cert.intervals[i];
    const double mid = 0.5 * (J.lo + J.hi);
    Enclosure a = encloser.enclose(J.lo, cert.l, nullptr);
    Enclosure b = encloser.enclose(mid, cert.l, nullptr);
    Enclosure c = encloser.enclose(J.hi, cert.l, nullptr);
    for (std::size_t j = 0; j < m; ++j) {
      if (!cert.covering[i][j]) continue;
      const auto& target = cert.intervals[j];
      if (covers(a, b, target) || covers(b, c, target)) continue;
      // A target straddling the middle value needs both halves.
      const Enclosure& ab_low = a.hi <= b.hi ? a : b;
      const Enclosure& bc_high = c.hi >= b.hi ? c : b;
      bool joint = ab_low.hi <= target.lo && target.hi <= bc_high.lo &&
                   ((covers(a, b, {target.lo, b.lo}) && covers(b, c, {b.hi, target.hi})) ||
                    (covers(b, c, {target.lo, b.lo}) && covers(a, b, {b.hi, target.hi})));
      if (!joint) return false;
    }
  }
  return true;
}

double theoretical_chain(double r, int l, double delta, double multiplier, double C) {
  if (l < 1) throw InvalidArgument("horizon l must be >= 1");
  const double lambda = std::abs(multiplier);
  return ((r - 1.0) * std::log(delta) + l * std::log(lambda) - std::log(C * l)) / (r * l);
}

std::vector<JumpRow> jump_experiment(const IntervalMap& map, const TangencyData& t, double r,
                                     const std::vector<int>& l_list, double delta, double C) {
  if (l_list.empty()) throw InvalidArgument("empty l list");
  if (!std::is_sorted(l_list.begin(), l_list.end())) throw InvalidArgument("l list must be increasing");
  std::vector<JumpRow> rows;
  for (int l : l_list) {
    JumpRow row;
    row.l = l;
    row.delta = delta;
    row.lambda_over_r = std::log(std::abs(t.multiplier)) / r;
    try {
      PerturbationParams p{delta, l, C, r};
      auto d = derive_parameters(t, p);
      row.amplitude = d.amplitude;
      row.frequency = d.frequency;
      row.theoretical_chain = theoretical_chain(r, l, delta, t.multiplier, C);
      if (!d.long_horizon) row.warning = "l < 5|log delta|";
      if (d.frequency < 2) {
        row.error = "N < 2: skipped";
        row.skipped = true;
        rows.push_back(row);
        continue;
      }
      auto g = construct_perturbation(map, t, p);
      auto support = perturbation_support(t, delta);
      row.cr_distance = cr_distance(map, g, r, std::max<std::size_t>(4000, std::size_t(40 * d.frequency)), support);
      auto cert = certify_horseshoe(g, l, perturbation_window(t, delta));
      row.certified_entropy = cert.entropy_bound;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hofent
