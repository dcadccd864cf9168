#include "hofent/builtins.hpp"

#include <cmath>
#include <string>

#include "hofent/error.hpp"

namespace hofent {

IntervalMap identity_map() {
  return IntervalMap::piecewise_linear({{0, 1, 0, 1}}, kAnalytic, "identity");
}

IntervalMap tent_map(const Rational& slope) {
  Rational s = slope;
  s.canonicalize();
  if (s <= 0 || s > 2) throw InvalidArgument("tent slope must lie in (0, 2]");
  Rational half(1, 2);
  return IntervalMap::piecewise_linear({{0, half, 0, s}, {half, 1, s, -s}}, kAnalytic,
                                       "tent:" + to_string(s));
}

IntervalMap logistic_map(double a) {
  if (!(a > 0.0 && a <= 4.0)) throw InvalidArgument("logistic parameter must lie in (0, 4]");
  char buf[64];
  std::snprintf(buf, sizeof buf, "logistic:%.12g", a);
  return IntervalMap({{0.0, 1.0, std::make_shared<PolynomialBranch>(std::vector<double>{0.0, a, -a})}},
                     kAnalytic, buf);
}

IntervalMap tangency_map(double r) {
  using G = TangencyGeometry;
  if (!(r >= 1.0 && r <= G::max_order)) throw InvalidArgument("tangency family supports 1 <= r <= 3");
  const double p = G::periodic_point, lam = G::multiplier;
  const double top = 0.7;  // value where the expanding piece hands over to the cap
  const double b = p - lam * p;

  auto poly = [](std::vector<double> c, double center = 0.0) {
    return std::make_shared<PolynomialBranch>(std::move(c), center);
  };
  const double contracting = (lam * G::expanding_lo + b) / G::expanding_lo;
  auto cap = hermite_interpolant(G::expanding_hi, {top, lam, 0.0, 0.0}, G::plateau_lo, {p, 0.0, 0.0, 0.0});
  const double tail_width = 1.0 - G::plateau_hi;
  const double quartic = 0.2 / std::pow(tail_width, 4);

  std::vector<Piece> pieces{
      {0.0, G::expanding_lo, poly({0.0, contracting})},
      {G::expanding_lo, G::expanding_hi, poly({b, lam})},
      {G::expanding_hi, G::plateau_lo, poly(cap, G::expanding_hi)},
      {G::plateau_lo, G::plateau_hi, poly({p})},
      {G::plateau_hi, 1.0, poly({p, 0.0, 0.0, 0.0, quartic}, G::plateau_hi)},
  };
  char buf[64];
  std::snprintf(buf, sizeof buf, "tangency:%.12g", r);
  return IntervalMap(std::move(pieces), r, buf);
}

IntervalMap builtin_map(std::string_view spec) {
  std::string s(spec);
  if (s.rfind("builtin:", 0) == 0) s = s.substr(8);
  auto colon = s.find(':');
  std::string family = s.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
  auto need_arg = [&] {
    if (arg.empty()) throw InvalidArgument("builtin '" + family + "' needs a parameter");
  };
  auto as_double = [&](const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size()) throw InvalidArgument("bad numeric parameter '" + text + "'");
    return v;
  };

  if (family == "identity" && arg.empty()) return identity_map();
  if (family == "tent") {
    need_arg();
    return tent_map(parse_rational(arg));
  }
  if (family == "logistic") {
    need_arg();
    return logistic_map(as_double(arg));
  }
  if (family == "tangency") return tangency_map(arg.empty() ? 3.0 : as_double(arg));
  throw InvalidArgument("unknown builtin map '" + std::string(spec) + "'");
}

}  // namespace hofent
