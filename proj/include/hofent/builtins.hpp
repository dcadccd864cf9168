#pragma once

#include <limits>
#include <string_view>

#include "hofent/maps.hpp"

namespace hofent {

inline constexpr double kAnalytic = std::numeric_limits<double>::infinity();

IntervalMap identity_map();
/// s*x on [0,1/2], s*(1-x) on [1/2,1]; exact, 0 < s <= 2.
IntervalMap tent_map(const Rational& slope);
/// a*x*(1-x), 0 < a <= 4.
IntervalMap logistic_map(double a);

/// Geometry of the built-in map with a flat homoclinic tangency.
///
/// The fixed point `periodic_point` sits on an affine piece of slope
/// `multiplier`; the critical plateau [plateau_lo, plateau_hi] contains
/// `critical_point` and is sent onto the fixed point in one step. Every
/// derivative vanishes on the plateau, and the gluing pieces are C^3.
struct TangencyGeometry {
  static constexpr double critical_point = 0.7;
  static constexpr double periodic_point = 0.1;
  static constexpr double multiplier = 4.0;
  static constexpr int connecting_time = 1;
  static constexpr double plateau_lo = 0.58;
  static constexpr double plateau_hi = 0.82;
  static constexpr double expanding_lo = 0.08;
  static constexpr double expanding_hi = 0.25;
  static constexpr double default_delta = 0.1;
  static constexpr double default_amplitude = 32.0;
  static constexpr double max_order = 3.0;
};

/// Tangency family with declared smoothness r in [1, 3].
IntervalMap tangency_map(double r = 3.0);

/// Parses "identity", "tent:<s>", "logistic:<a>", "tangency[:<r>]", with or
/// without a leading "builtin:".
IntervalMap builtin_map(std::string_view spec);

}  // namespace hofent
