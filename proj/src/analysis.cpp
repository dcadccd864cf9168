#include "hofent/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hofent/error.hpp"
#include "hofent/graphs.hpp"
#include "hofent/hofbauer.hpp"

namespace hofent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double aitken(double a, double b, double c) {
  double denom = c - 2 * b + a;
  if (std::abs(denom) < 1e-14) return c;
  return c - (c - b) * (c - b) / denom;
}

}  // namespace

// ---------------------------------------------------------------- entropy

EntropyEstimate entropy_lap(const IntervalMap& map, int n_max, std::size_t budget) {
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  EntropyEstimate est;
  est.method = "lap";
  std::vector<double> logs{0.0};
  for (int n = 1; n <= n_max; ++n) {
    try {
      logs.push_back(log_bigint(lap_count(map, n, budget)));
    } catch (const BudgetError&) {
      est.partial = true;
      est.note = "lap budget exceeded at n=" + std::to_string(n);
      break;
    }
    est.sequence.push_back(logs.back() / n);
  }
  const int n = static_cast<int>(logs.size()) - 1;
  est.horizon = n;
  if (n == 0) return est;
  auto two_step = [&](int k) { return (logs[k] - logs[k - 2]) / 2.0; };
  if (n < 2) {
    est.value = logs[1];
  } else if (n < 6) {
    est.value = two_step(n);
  } else {
    double last = two_step(n);
    double acc = aitken(two_step(n - 4), two_step(n - 2), last);
    // Lap ratios approach the limit from above; reject overshooting steps.
    est.value = acc >= 0.0 && acc <= last ? acc : last;
  }
  est.value = std::max(est.value, 0.0);
  return est;
}

namespace {

template <typename Scalar>
EntropyEstimate hofbauer_estimate(const IntervalMap& map, int N, int p_max) {
  EntropyEstimate est;
  est.method = "hofbauer";
  est.horizon = N;
  auto partition = natural_partition<Scalar>(map);
  if (partition.size() == 0) {
    est.partial = true;
    est.note = "no monotone branch";
    return est;
  }
  auto diagram = build_diagram(map, partition, N);
  if (diagram.vertices.empty()) {
    est.partial = true;
    est.note = "empty diagram";
    return est;
  }
  OrientedGraph g = diagram.graph();
  double best = 0.0;
  for (int n = 1; n <= N; ++n) {
    std::vector<int> keep;
    for (std::size_t v = 0; v < diagram.vertices.size(); ++v)
      if (diagram.vertices[v].depth <= n) keep.push_back(int(v));
    best = std::max(best, spectral_entropy(g.induced(keep)));
    est.sequence.push_back(best);
  }
  est.value = best;

  // Path counts at the longest-image vertex of the dominant component.
  const std::vector<int>* dominant = nullptr;
  double top = -1.0;
  auto comps = strongly_connected_components(g);
  for (const auto& c : comps) {
    if (!has_cycle(g, c)) continue;
    double rho = component_spectral_radius(g, c);
    if (rho > top + 1e-12) {
      top = rho;
      dominant = &c;
    }
  }
  if (dominant) {
    int longest = dominant->front();
    for (int v : *dominant)
      if (vertex_L(diagram.vertices[v]) > vertex_L(diagram.vertices[longest])) longest = v;
    est.gurevic = gurevic_entropy(g, longest, p_max).estimate;
  }
  return est;
}

}  // namespace

EntropyEstimate entropy_hofbauer(const IntervalMap& map, int N, int p_max) {
  if (N < 1) throw InvalidArgument("diagram depth N must be >= 1");
  return map.exact() ? hofbauer_estimate<Rational>(map, N, p_max)
                     : hofbauer_estimate<double>(map, N, p_max);
}

GrowthRate growth_rate_R(const IntervalMap& map, int n_max) {
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  GrowthRate out;
  out.value = kInf;
  for (int n = 1; n <= n_max; ++n) {
    double norm = sup_deriv_norm(map, n);
    double v = norm > 1.0 ? std::log(norm) / n : 0.0;
    out.sequence.push_back(v);
    out.value = std::min(out.value, v);
  }
  return out;
}

// ---------------------------------------------------------------- periodic points

namespace {

struct AffineCylinder {
  Rational lo, hi;        // closed domain
  Rational slope, shift;  // f^k(x) = slope * x + shift on the domain
};

std::vector<PeriodicPoint> exact_periodic(const IntervalMap& map, int T, double tol) {
  const auto& pieces = map.linear_pieces();
  std::vector<AffineCylinder> layer{{0, 1, 1, 0}};
  for (int k = 0; k < T; ++k) {
    std::vector<AffineCylinder> next;
    for (const auto& c : layer) {
      for (const auto& p : pieces) {
        Rational lo = c.lo, hi = c.hi;
        if (sgn(c.slope) == 0) {
          if (c.shift < p.lo || c.shift > p.hi) continue;
        } else {
          Rational a = (p.lo - c.shift) / c.slope, b = (p.hi - c.shift) / c.slope;
          if (b < a) std::swap(a, b);
          if (a > lo) lo = a;
          if (b < hi) hi = b;
          if (hi < lo) continue;
        }
        lo.canonicalize();
        hi.canonicalize();
        Rational slope = p.slope * c.slope, shift = p.slope * c.shift + p.intercept;
        slope.canonicalize();
        shift.canonicalize();
        next.push_back({lo, hi, slope, shift});
      }
    }
    layer = std::move(next);
    if (layer.size() > 4'000'000) throw BudgetError("periodic-point search exceeded its budget");
  }

  std::vector<PeriodicPoint> out;
  auto seen = [&](const Rational& x) {
    for (const auto& q : out)
      if (q.exact_point && (*q.exact_point == x || (q.interval && x >= *q.exact_point && x <= Rational(q.interval_end))))
        return true;
    return false;
  };
  for (const auto& c : layer) {
    PeriodicPoint pp;
    pp.period = T;
    pp.multiplier = c.slope.get_d();
    if (c.slope == 1) {
      if (c.shift != 0) continue;
      if (seen(c.lo)) continue;
      pp.exact_point = c.lo;
      pp.point = c.lo.get_d();
      pp.interval = true;
      pp.interval_end = c.hi.get_d();
    } else {
      Rational x = c.shift / (1 - c.slope);
      x.canonicalize();
      if (x < c.lo || x > c.hi || seen(x)) continue;
      pp.exact_point = x;
      pp.point = x.get_d();
    }
    pp.indeterminate = std::abs(std::abs(pp.multiplier) - 1.0) <= tol;
    pp.repelling = !pp.indeterminate && std::abs(pp.multiplier) > 1.0;
    out.push_back(pp);
  }
  // Merge adjacent fixed intervals into one.
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return *a.exact_point < *b.exact_point; });
  std::vector<PeriodicPoint> merged;
  for (auto& p : out) {
    if (!merged.empty() && merged.back().interval && p.interval &&
        *p.exact_point <= Rational(merged.back().interval_end)) {
      merged.back().interval_end = std::max(merged.back().interval_end, p.interval_end);
      continue;
    }
    merged.push_back(p);
  }
  return merged;
}

double iterate(const IntervalMap& map, double x, int T) {
  for (int k = 0; k < T; ++k) x = eval(map, x);
  return x;
}

double multiplier_at(const IntervalMap& map, double x, int T) {
  double m = 1.0;
  for (int k = 0; k < T; ++k) {
    m *= deriv(map, x, 1);
    x = eval(map, x);
  }
  return m;
}

std::vector<PeriodicPoint> float_periodic(const IntervalMap& map, int T, double tol) {
  constexpr int kGrid = 20000;
  std::vector<double> roots;
  double prev_x = 0.0, prev_v = iterate(map, 0.0, T);
  if (prev_v == 0.0) roots.push_back(0.0);
  for (int j = 1; j <= kGrid; ++j) {
    double x = double(j) / kGrid;
    double v = iterate(map, x, T) - x;
    if (v == 0.0) {
      roots.push_back(x);
    } else if (prev_v != 0.0 && (v > 0) != (prev_v > 0)) {
      double a = prev_x, b = x, fa = prev_v;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        double m = 0.5 * (a + b), fm = iterate(map, m, T) - m;
        if ((fm > 0) == (fa > 0)) { a = m; fa = fm; } else { b = m; }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_v = v;
  }
  std::vector<PeriodicPoint> out;
  for (double x : roots) {
    if (!out.empty() && std::abs(out.back().point - x) < 1e-9) continue;
    PeriodicPoint pp;
    pp.point = x;
    pp.period = T;
    pp.multiplier = multiplier_at(map, x, T);
    pp.indeterminate = std::abs(std::abs(pp.multiplier) - 1.0) <= tol;
    pp.repelling = !pp.indeterminate && std::abs(pp.multiplier) > 1.0;
    out.push_back(pp);
  }
  return out;
}

}  // namespace

std::vector<PeriodicPoint> find_periodic(const IntervalMap& map, int T, double tol) {
  if (T < 1) throw InvalidArgument("period T must be >= 1");
  return map.exact() ? exact_periodic(map, T, tol) : float_periodic(map, T, tol);
}

double lyapunov_at_periodic(const IntervalMap& map, double point, int T, double tol) {
  if (T < 1) throw InvalidArgument("period T must be >= 1");
  if (std::abs(iterate(map, point, T) - point) > std::max(tol, 1e-9))
    throw InvalidArgument("point is not T-periodic");
  double m = multiplier_at(map, point, T);
  if (m == 0.0) return -kInf;
  return std::log(std::abs(m)) / T;
}

// ---------------------------------------------------------------- beta

namespace {

// Turning points: extrema between branches of opposite monotonicity, as
// closed intervals (plateaus) or degenerate intervals.
std::vector<Interval<double>> turning_sets(const IntervalMap& map) {
  auto part = natural_partition<double>(map);
  std::vector<Interval<double>> out;
  for (std::size_t i = 0; i + 1 < part.size(); ++i)
    if (part.direction[i] != part.direction[i + 1])
      out.push_back({part.branches[i].hi, part.branches[i + 1].lo});
  return out;
}

int minimal_period(const IntervalMap& map, const PeriodicPoint& p) {
  if (p.exact_point) {
    Rational x = *p.exact_point;
    for (int q = 1; q <= p.period; ++q) {
      x = eval(map, x);
      if (x == *p.exact_point) return q;
    }
    return p.period;
  }
  double x = p.point;
  for (int q = 1; q <= p.period; ++q) {
    x = eval(map, x);
    if (std::abs(x - p.point) < 1e-8) return q;
  }
  return p.period;
}

}  // namespace

BetaEstimate beta_bound(const IntervalMap& map, int Q_max) {
  if (Q_max < 1) throw InvalidArgument("Q_max must be >= 1");
  BetaEstimate out;
  out.search_horizon = Q_max;
  auto turning = turning_sets(map);
  if (turning.empty()) return out;
  const double tol = map.exact() ? 0.0 : 1e-9;
  for (int q = 1; q <= Q_max; ++q) {
    for (const auto& p : find_periodic(map, q)) {
      if (p.interval || minimal_period(map, p) != q) continue;
      ++out.orbit_count;
      int hits = 0;
      if (p.exact_point) {
        Rational x = *p.exact_point;
        for (int k = 0; k < q; ++k, x = eval(map, x)) {
          double xd = x.get_d();
          for (const auto& t : turning)
            if (map.exact() ? (Rational(t.lo) <= x && x <= Rational(t.hi)) : (xd >= t.lo - tol && xd <= t.hi + tol)) {
              ++hits;
              break;
            }
        }
      } else {
        double x = p.point;
        for (int k = 0; k < q; ++k, x = eval(map, x))
          for (const auto& t : turning)
            if (x >= t.lo - 1e-9 && x <= t.hi + 1e-9) {
              ++hits;
              break;
            }
      }
      out.value = std::max(out.value, double(hits) / q * std::log(2.0));
    }
  }

  // Periodic points are searched inside open branches, so orbits through a
  // turning point are followed from the turning point itself.
  auto in_turning = [&](double x) {
    for (const auto& t : turning)
      if (x >= t.lo - 1e-9 && x <= t.hi + 1e-9) return true;
    return false;
  };
  std::vector<Rational> exact_turning;
  if (map.exact())
    for (const auto& c : critical_set<Rational>(map).points)
      if (in_turning(c.get_d())) exact_turning.push_back(c);
  for (std::size_t i = 0; i < turning.size(); ++i) {
    const auto& t = turning[i];
    std::vector<double> orbit_pts{t.lo};
    int q = 0;
    if (map.exact() && t.lo == t.hi) {
      Rational start;
      for (const auto& c : exact_turning)
        if (std::abs(c.get_d() - t.lo) <= 1e-15) start = c;
      Rational x = eval(map, start);
      for (int k = 1; k <= Q_max && !q; ++k, x = eval(map, x)) {
        if (x == start) q = k;
        else orbit_pts.push_back(x.get_d());
      }
    } else {
      double x = eval(map, t.lo);
      for (int k = 1; k <= Q_max && !q; ++k, x = eval(map, x)) {
        if (x >= t.lo - tol && x <= t.hi + tol) q = k;
        else orbit_pts.push_back(x);
      }
    }
    if (!q) continue;
    ++out.orbit_count;
    int hits = 0;
    for (double x : orbit_pts) hits += in_turning(x);
    out.value = std::max(out.value, double(hits) / q * std::log(2.0));
  }
  return out;
}

// ---------------------------------------------------------------- bounds

BoundsReport bounds_report(const IntervalMap& map, double r, const BoundsParams& params) {
  if (!(r >= 1.0)) throw InvalidArgument("smoothness order r must be >= 1");
  BoundsReport rep;
  rep.map_name = map.name();
  rep.r = r;
  if (params.use_hofbauer) {
    try {
      auto hof = entropy_hofbauer(map, params.diagram_depth, params.p_max);
      rep.h_hofbauer = hof.value;
      rep.hofbauer_sequence = hof.sequence;
    } catch (const Error& e) {
      rep.notes.push_back(std::string("hofbauer: ") + e.what());
    }
  }
  if (params.use_lap) {
    try {
      auto lap = entropy_lap(map, params.lap_depth);
      rep.h_lap = lap.value;
      rep.lap_sequence = lap.sequence;
      if (lap.partial) rep.notes.push_back("lap: " + lap.note);
    } catch (const Error& e) {
      rep.notes.push_back(std::string("lap: ") + e.what());
    }
  }
  if (rep.h_hofbauer) {
    rep.h = *rep.h_hofbauer;
    rep.h_method = "hofbauer";
  } else if (rep.h_lap) {
    rep.h = *rep.h_lap;
    rep.h_method = "lap";
  } else {
    rep.h_method = "none";
  }
  try {
    auto R = growth_rate_R(map, params.derivative_depth);
    rep.R = R.value;
    rep.R_sequence = R.sequence;
  } catch (const Error& e) {
    rep.notes.push_back(std::string("R: ") + e.what());
  }
  rep.yomdin_bound = rep.h + rep.R / r;
  rep.main_bound = std::max(rep.h, rep.R / r);
  try {
    rep.beta = beta_bound(map, params.period_search).value;
    for (int T = 1; T <= params.period_search; ++T)
      for (const auto& p : find_periodic(map, T))
        if (p.repelling && !p.interval) rep.lyapunov.push_back(std::log(std::abs(p.multiplier)) / T);
  } catch (const Error& e) {
    rep.notes.push_back(std::string("periodic: ") + e.what());
  }
  return rep;
}

std::vector<BranchCountRow> critical_branch_count_check(const IntervalMap& map, double r,
                                                        const std::vector<double>& thresholds) {
  if (!(r > 1.0)) throw InvalidArgument("critical branch count needs r > 1");
  const int order = static_cast<int>(std::floor(r));
  if (order > map.max_derivative_order())
    throw UnsupportedOrderError("derivative of order floor(r) unavailable");
  const double norm = sup_abs_derivative(map, {0.0, 1.0}, order);
  auto part = natural_partition<double>(map);
  std::vector<double> sups;
  for (const auto& b : part.branches) sups.push_back(sup_abs_derivative(map, b, 1));
  std::vector<BranchCountRow> rows;
  for (double l : thresholds) {
    BranchCountRow row;
    row.threshold = l;
    row.derivative_norm = norm;
    row.count = static_cast<int>(std::count_if(sups.begin(), sups.end(), [&](double s) { return s > l; }));
    double scale = norm * std::pow(l, 1.0 / (r - 1.0));
    row.ratio = scale > 0.0 ? row.count / scale : kInf;
    rows.push_back(row);
  }
  return rows;
}

RuelleReport ruelle_check(const IntervalMap& map, const std::vector<double>& starts,
                          const RuelleParams& params) {
  if (starts.empty()) throw InvalidArgument("ruelle_check needs starting points");
  if (params.short_horizon < 1 || params.long_horizon <= params.short_horizon)
    throw InvalidArgument("need 1 <= short_horizon < long_horizon");
  RuelleReport rep;
  std::vector<std::vector<double>> orbits;
  double log_sum = 0.0;
  std::size_t log_terms = 0;
  for (double x0 : starts) {
    std::vector<double> pts;
    double nudge = 0.0;
    for (int attempt = 0; attempt < 10; ++attempt) {
      pts.clear();
      double x = std::clamp(x0 + nudge, 0.0, 1.0);
      bool hit = false;
      for (int k = 0; k < params.orbit_length; ++k) {
        pts.push_back(x);
        if (deriv(map, x, 1) == 0.0) {
          hit = true;
          break;
        }
        x = eval(map, x);
      }
      if (!hit) break;
      ++rep.resampled;
      nudge = 1e-7 * (attempt + 1);
    }
    for (double x : pts) {
      double d = std::abs(deriv(map, x, 1));
      if (d == 0.0) continue;
      log_sum += std::log(d);
      ++log_terms;
    }
    orbits.push_back(std::move(pts));
  }
  rep.lyapunov = log_terms ? log_sum / double(log_terms) : 0.0;

  // Points usable for separation at horizon k: orbit positions with k future points.
  auto separated_count = [&](int k) {
    std::vector<const double*> chosen;
    std::size_t count = 0;
    for (const auto& o : orbits) {
      for (std::size_t i = 0; i + std::size_t(k) <= o.size(); ++i) {
        const double* cand = &o[i];
        bool far = true;
        for (const double* c : chosen) {
          double dist = 0.0;
          for (int j = 0; j < k; ++j) dist = std::max(dist, std::abs(cand[j] - c[j]));
          if (dist <= params.separation) {
            far = false;
            break;
          }
        }
        if (far) {
          chosen.push_back(cand);
          ++count;
        }
      }
    }
    return count;
  };
  for (const auto& o : orbits) rep.points += o.size();
  double s1 = double(separated_count(params.short_horizon));
  double s2 = double(separated_count(params.long_horizon));
  rep.entropy_proxy = s1 > 0 && s2 > 0
                          ? std::max(0.0, (std::log(s2) - std::log(s1)) / (params.long_horizon - params.short_horizon))
                          : 0.0;
  rep.consistent = rep.entropy_proxy <= std::max(rep.lyapunov, 0.0) + params.tolerance;
  return rep;
}

}  // namespace hofent
