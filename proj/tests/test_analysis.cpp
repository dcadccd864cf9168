#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hofent/analysis.hpp"
#include "hofent/builtins.hpp"
#include "hofent/error.hpp"

using namespace hofent;

namespace {

const double kLog2 = std::log(2.0);

IntervalMap knots(std::vector<std::pair<Rational, Rational>> pts, const char* name) {
  return IntervalMap::from_knots(pts, 1.0, name);
}

// Slope 1 then -1: the turning point 1/2 is fixed.
IntervalMap fixed_turning() { return knots({{0, 0}, {Rational(1, 2), Rational(1, 2)}, {1, 0}}, "fixed-turn"); }

// Turning point 1/2 -> 3/4 -> 1/2; 3/4 is not a turning point.
IntervalMap two_cycle_turning() {
  return knots({{0, 0}, {Rational(1, 2), Rational(3, 4)}, {1, Rational(1, 4)}}, "two-cycle");
}

bool has_point(const std::vector<PeriodicPoint>& pts, double x, double multiplier) {
  for (const auto& p : pts)
    if (std::abs(p.point - x) < 1e-9 && std::abs(p.multiplier - multiplier) < 1e-9) return true;
  return false;
}

}  // namespace

TEST_CASE("lap-growth entropy") {
  CHECK(std::abs(entropy_lap(tent_map(2), 12).value - kLog2) <= 1e-6);
  CHECK(entropy_lap(identity_map(), 12).value == doctest::Approx(0.0));
  CHECK(std::abs(entropy_lap(tent_map(Rational(3, 2)), 20).value - std::log(1.5)) <= 0.02);
}

TEST_CASE("diagram entropy") {
  CHECK(std::abs(entropy_hofbauer(tent_map(2), 1).value - kLog2) <= 1e-6);
  CHECK(entropy_hofbauer(identity_map(), 5).value == doctest::Approx(0.0));
  auto f = tent_map(Rational(9, 5));
  CHECK(std::abs(entropy_hofbauer(f, 12).value - entropy_lap(f, 20).value) <= 0.02);
}

TEST_CASE("both estimators agree on tent maps") {
  // At the stated depths only slopes >= 1.4 have converged; below that the
  // truncated diagrams lag (see the deeper check).
  for (int tenths = 14; tenths <= 20; ++tenths) {
    auto f = tent_map(Rational(tenths, 10));
    CAPTURE(tenths);
    CHECK(std::abs(entropy_hofbauer(f, 12).value - entropy_lap(f, 20).value) <= 0.02);
  }
  for (int tenths = 12; tenths <= 20; ++tenths) {
    auto f = tent_map(Rational(tenths, 10));
    CAPTURE(tenths);
    double hof = entropy_hofbauer(f, 30).value, lap = entropy_lap(f, 60).value;
    CHECK(std::abs(hof - lap) <= 0.02);
    CHECK(std::abs(hof - std::log(tenths / 10.0)) <= 0.02);
  }
}

TEST_CASE("diagram entropy is nondecreasing in depth") {
  std::vector<IntervalMap> maps{tent_map(Rational(13, 10)), tent_map(Rational(3, 2)),
                                tent_map(Rational(9, 5)), logistic_map(3.83), logistic_map(4.0),
                                tangency_map(), two_cycle_turning()};
  for (const auto& f : maps) {
    auto seq = entropy_hofbauer(f, 12).sequence;
    CAPTURE(f.name());
    REQUIRE(seq.size() == 12);
    for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i] >= seq[i - 1] - 1e-9);
  }
}

TEST_CASE("derivative growth rate") {
  auto tent = growth_rate_R(tent_map(2), 8);
  for (double v : tent.sequence) CHECK(v == doctest::Approx(kLog2));
  CHECK(growth_rate_R(identity_map(), 8).value == doctest::Approx(0.0));
  auto logistic = growth_rate_R(logistic_map(4.0), 8);
  CHECK(logistic.sequence[0] <= std::log(4.0) + 1e-9);
  // The reported value never increases as more terms are used.
  double previous = INFINITY;
  for (int n = 1; n <= 8; ++n) {
    double v = growth_rate_R(logistic_map(3.7), n).value;
    CHECK(v <= previous + 1e-12);
    previous = v;
  }
}

TEST_CASE("periodic points") {
  auto tent = tent_map(2);
  auto fixed = find_periodic(tent, 1);
  CHECK(fixed.size() == 2);
  CHECK(has_point(fixed, 0.0, 2.0));
  CHECK(has_point(fixed, 2.0 / 3, -2.0));
  auto period2 = find_periodic(tent, 2);
  CHECK(has_point(period2, 0.4, -4.0));
  CHECK(has_point(period2, 0.8, -4.0));
  for (const auto& p : period2) CHECK(std::abs(p.multiplier) == doctest::Approx(4.0));

  auto id = find_periodic(identity_map(), 1);
  REQUIRE(id.size() == 1);
  CHECK(id[0].interval);
}

TEST_CASE("Lyapunov exponents at periodic points") {
  CHECK(lyapunov_at_periodic(tent_map(2), 2.0 / 3, 1) == doctest::Approx(kLog2));
  CHECK(lyapunov_at_periodic(tent_map(2), 0.4, 2) == doctest::Approx(kLog2));
  CHECK(lyapunov_at_periodic(identity_map(), 0.3, 1) == doctest::Approx(0.0));
}

TEST_CASE("turning-point orbit bound") {
  CHECK(beta_bound(tent_map(2), 10).value == doctest::Approx(0.0));
  CHECK(beta_bound(fixed_turning(), 6).value == doctest::Approx(kLog2));
  CHECK(beta_bound(two_cycle_turning(), 6).value == doctest::Approx(kLog2 / 2));
}

TEST_CASE("bound report") {
  BoundsParams params;
  params.diagram_depth = 8;
  auto rep = bounds_report(tent_map(2), 2.0, params);
  CHECK(rep.h == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(rep.R == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(rep.yomdin_bound == doctest::Approx(1.039721).epsilon(1e-6));
  CHECK(rep.main_bound == doctest::Approx(0.693147).epsilon(1e-6));

  auto id = bounds_report(identity_map(), 3.0, params);
  CHECK(id.h == 0.0);
  CHECK(id.R == 0.0);
  CHECK(id.yomdin_bound == 0.0);
  CHECK(id.main_bound == 0.0);

  CHECK_THROWS_AS(bounds_report(tent_map(2), 0.5), InvalidArgument);
}

TEST_CASE("bound ordering and Lyapunov exponents on a suite of maps") {
  std::vector<IntervalMap> maps{tent_map(Rational(3, 2)), tent_map(2), logistic_map(3.2),
                                logistic_map(3.9), tangency_map(), identity_map(),
                                fixed_turning(), two_cycle_turning()};
  BoundsParams params;
  params.diagram_depth = 8;
  params.lap_depth = 14;
  params.derivative_depth = 8;
  for (const auto& f : maps)
    for (double r : {1.0, 2.0, 3.0}) {
      CAPTURE(f.name());
      auto rep = bounds_report(f, r, params);
      CHECK(rep.main_bound <= rep.yomdin_bound + 1e-12);
      if (rep.h == 0.0) CHECK(rep.main_bound == doctest::Approx(rep.yomdin_bound));
      for (double lyap : rep.lyapunov) CHECK(lyap <= rep.R + 1e-9);
    }
}

TEST_CASE("critical branch counts") {
  auto rows = critical_branch_count_check(tent_map(2), 2.0, {1.0});
  CHECK(rows[0].count == 2);
  CHECK(critical_branch_count_check(identity_map(), 2.0, {0.5})[0].count == 1);
  CHECK(critical_branch_count_check(logistic_map(4.0), 2.0, {5.0})[0].count == 0);
}

TEST_CASE("Ruelle diagnostic") {
  std::vector<double> starts{0.1234, 0.3141, 0.5772, 0.7071, 0.8660};
  auto tent = ruelle_check(tent_map(2), starts);
  CHECK(tent.lyapunov == doctest::Approx(kLog2).epsilon(1e-9));
  CHECK(tent.consistent);

  auto sink = ruelle_check(logistic_map(2.5), starts);
  CHECK(sink.lyapunov < 0.0);
  CHECK(sink.entropy_proxy <= RuelleParams{}.tolerance);
  CHECK(sink.consistent);

  auto id = ruelle_check(identity_map(), starts);
  CHECK(id.lyapunov == doctest::Approx(0.0));
  CHECK(id.entropy_proxy == doctest::Approx(0.0));
}
