#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hofent/maps.hpp"

namespace hofent {

struct TangencyData {
  double critical_point = 0.0;
  double periodic_point = 0.0;
  int period = 1;
  double multiplier = 0.0;   // (f^period)'(periodic_point)
  int connecting_time = 1;   // f^k(critical_point) = periodic_point
  int flatness = 0;          // derivatives 1..flatness vanish at the critical point
};

struct TangencySearch {
  int max_period = 4;
  int max_connecting_time = 8;
  double tol = 1e-9;
};

std::optional<TangencyData> find_tangency(const IntervalMap& map, const TangencySearch& search = {});

struct PerturbationParams {
  double delta = 0.1;   // window half-width
  int l = 15;           // iteration horizon
  double C = 1.0;       // amplitude constant
  double r = 3.0;       // smoothness order of the family
};

struct DerivedParams {
  double amplitude = 0.0;  // a = C delta |multiplier|^(-l)
  long frequency = 0;      // N = floor((delta^r / (a l))^(1/r))
  bool long_horizon = true;  // l >= 5 |log delta|
};

DerivedParams derive_parameters(const TangencyData& t, const PerturbationParams& p);

/// g = f(c) + a sin(N x / delta) on the window (c - delta, c + delta), glued to
/// f on blends of width delta/10 outside the window.
IntervalMap construct_perturbation(const IntervalMap& map, const TangencyData& t,
                                   const PerturbationParams& p);

/// Window (c - delta, c + delta) and support (blends included).
Interval<double> perturbation_window(const TangencyData& t, double delta);
Interval<double> perturbation_support(const TangencyData& t, double delta);

/// max over k = 0..floor(r) of the sampled sup |D^k (g - f)| over `where`,
/// at the midpoints of `grid_cells` equal cells.
double cr_distance(const IntervalMap& f, const IntervalMap& g, double r, std::size_t grid_cells,
                   const Interval<double>& where = {0.0, 1.0});

struct HorseshoeCertificate {
  int l = 1;
  std::vector<Interval<double>> intervals;
  std::vector<std::vector<char>> covering;  // covering[i][j]: g^l(J_i) covers closure(J_j)
  double spectral_radius = 0.0;
  double entropy_bound = 0.0;               // log(spectral radius) / l
  double max_expansion = 0.0;               // largest |(g^{l-1})'| met after the first step
};

inline constexpr double kExpansionGuard = 1e14;

/// Covering relations between laps of g inside `window` (or `candidates`)
/// from enclosures of g^l at the lap endpoints; g^l(J_i) covers J_j when the
/// hull of the endpoint enclosures' inner bounds contains closure(J_j).
HorseshoeCertificate certify_horseshoe(const IntervalMap& g, int l, const Interval<double>& window,
                                       const std::vector<Interval<double>>* candidates = nullptr);

/// Recomputes every covering relation with each interval split in halves.
bool reverify_certificate(const IntervalMap& g, const HorseshoeCertificate& cert);

/// (1/(r l)) log(delta^(r-1) lambda^l / (C l)), lambda = |multiplier|.
double theoretical_chain(double r, int l, double delta, double multiplier, double C);

struct JumpRow {
  int l = 0;
  double delta = 0.0;
  double amplitude = 0.0;
  long frequency = 0;
  double cr_distance = 0.0;
  double certified_entropy = 0.0;
  double theoretical_chain = 0.0;
  double lambda_over_r = 0.0;
  std::string error;
  std::string warning;
  bool skipped = false;  // N < 2: no horseshoe claimable
};

std::vector<JumpRow> jump_experiment(const IntervalMap& map, const TangencyData& t, double r,
                                     const std::vector<int>& l_list, double delta, double C);

}  // namespace hofent
