#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hofent/maps.hpp"

namespace hofent {

struct EntropyEstimate {
  std::string method;           // "lap", "hofbauer"
  double value = 0.0;
  int horizon = 0;              // n_max or N reached
  std::vector<double> sequence; // (1/n) log lap(n), or h(D_n) for n = 1..N
  bool partial = false;         // budget hit or empty diagram
  std::string note;
  std::optional<double> gurevic;  // diagram path-count estimate at a longest-image vertex
};

/// Lap-growth entropy. The limit is extrapolated from the two-step ratios
/// (1/2) log(lap(n)/lap(n-2)) with an Aitken step over n-4, n-2, n.
EntropyEstimate entropy_lap(const IntervalMap& map, int n_max,
                            std::size_t budget = kDefaultLapBudget);

/// max spectral entropy over components of D_N; the sequence holds h(D_n).
EntropyEstimate entropy_hofbauer(const IntervalMap& map, int N, int p_max = 40);

struct GrowthRate {
  double value = 0.0;            // infimum of the sequence
  std::vector<double> sequence;  // (1/n) log+ sup |(f^n)'|
};

GrowthRate growth_rate_R(const IntervalMap& map, int n_max);

struct PeriodicPoint {
  double point = 0.0;
  std::optional<Rational> exact_point;
  int period = 1;                 // the T searched for, not necessarily minimal
  double multiplier = 0.0;        // (f^T)'(point)
  bool repelling = false;
  bool indeterminate = false;     // |multiplier| within tol of 1
  bool interval = false;          // [point, interval_end] consists of fixed points of f^T
  double interval_end = 0.0;
};

std::vector<PeriodicPoint> find_periodic(const IntervalMap& map, int T, double tol = 1e-9);

/// (1/T) log |(f^T)'(point)|; -infinity for a zero multiplier.
double lyapunov_at_periodic(const IntervalMap& map, double point, int T, double tol = 1e-9);

struct BetaEstimate {
  double value = 0.0;
  int orbit_count = 0;   // periodic orbits examined
  int search_horizon = 0;
};

/// max over periodic orbits of minimal period q <= Q_max of (t/q) log 2, t the
/// number of turning points on the orbit.
BetaEstimate beta_bound(const IntervalMap& map, int Q_max);

struct BoundsParams {
  int lap_depth = 20;
  int diagram_depth = 12;
  int p_max = 40;
  int derivative_depth = 12;
  int period_search = 6;
  bool use_lap = true;
  bool use_hofbauer = true;
};

struct BoundsReport {
  std::string map_name;
  double r = 1.0;
  double h = 0.0;
  std::string h_method;
  std::optional<double> h_lap, h_hofbauer;
  double R = 0.0;
  double yomdin_bound = 0.0;       // h + R/r
  double main_bound = 0.0;         // max(h, R/r)
  std::optional<double> beta;
  std::vector<double> lyapunov;    // at repelling periodic points
  std::vector<std::string> notes;  // per-field estimator failures
  std::vector<double> lap_sequence, hofbauer_sequence, R_sequence;
};

BoundsReport bounds_report(const IntervalMap& map, double r, const BoundsParams& params = {});

struct BranchCountRow {
  double threshold = 0.0;
  int count = 0;              // critical monotone branches with sup |f'| > threshold
  double derivative_norm = 0.0;  // sup |f^(floor r)|
  double ratio = 0.0;         // count / (norm * threshold^(1/(r-1))), inf for a zero norm
};

std::vector<BranchCountRow> critical_branch_count_check(const IntervalMap& map, double r,
                                                        const std::vector<double>& thresholds);

struct RuelleParams {
  int orbit_length = 40;
  int short_horizon = 2;
  int long_horizon = 6;
  double separation = 0.05;
  double tolerance = 0.15;
};

struct RuelleReport {
  double lyapunov = 0.0;
  double entropy_proxy = 0.0;
  bool consistent = true;   // proxy <= max(lyapunov, 0) + tolerance
  int resampled = 0;
  std::size_t points = 0;
};

/// Lyapunov average and (k, eps)-separation entropy proxy over orbits from
/// the given starting points. Orbits meeting a critical point are restarted
/// from a nudged point.
RuelleReport ruelle_check(const IntervalMap& map, const std::vector<double>& starts,
                          const RuelleParams& params = {});

}  // namespace hofent
