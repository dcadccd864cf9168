#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hofent/builtins.hpp"
#include "hofent/error.hpp"
#include "hofent/symbolic.hpp"

using namespace hofent;

namespace {

constexpr int L = 0, R = 1;

IntervalMap zigzag() {
  return IntervalMap::from_knots({{Rational(0), Rational(1, 5)},
                                  {Rational(2, 5), Rational(1)},
                                  {Rational(3, 4), Rational(1, 10)},
                                  {Rational(1), Rational(3, 5)}},
                                 1.0, "zigzag");
}

bool same(const Interval<Rational>& iv, Rational lo, Rational hi) {
  return iv.lo == lo && iv.hi == hi;
}

}  // namespace

TEST_CASE("cylinders of the full tent") {
  auto f = tent_map(2);
  auto P = natural_partition<Rational>(f);
  auto c1 = cylinder(f, P, {L});
  CHECK(same(c1.interval, 0, Rational(1, 2)));
  CHECK(same(c1.image, 0, 1));
  auto c2 = cylinder(f, P, {L, L});
  CHECK(same(c2.interval, 0, Rational(1, 4)));
  CHECK(same(c2.image, 0, 1));

  auto id = identity_map();
  auto Pid = natural_partition<Rational>(id);
  auto c3 = cylinder(id, Pid, {0, 0, 0});
  CHECK(same(c3.interval, 0, 1));
  CHECK(same(c3.image, 0, 1));
}

TEST_CASE("admissibility") {
  auto f = tent_map(2);
  auto P = natural_partition<Rational>(f);
  CHECK(is_admissible(f, P, {L, R}));
  auto id = identity_map();
  CHECK(is_admissible(id, natural_partition<Rational>(id), {0, 0, 0, 0}));

  // The last branch of the zigzag maps into (1/10, 3/5), which misses it.
  auto z = zigzag();
  auto Pz = natural_partition<Rational>(z);
  REQUIRE(Pz.size() == 3);
  CHECK_FALSE(is_admissible(z, Pz, {2, 2}));
  CHECK(is_admissible(z, Pz, {2, 1}));
}

TEST_CASE("follower images") {
  auto f = tent_map(2);
  auto P = natural_partition<Rational>(f);
  CHECK(same(follower_image(f, P, {L}), 0, 1));
  CHECK(same(follower_image(f, P, {R, L}), 0, 1));
  auto id = identity_map();
  CHECK(same(follower_image(id, natural_partition<Rational>(id), {0}), 0, 1));
}

TEST_CASE("itineraries") {
  auto f = tent_map(2);
  auto P = natural_partition<Rational>(f);
  CHECK(itinerary(f, natural_partition<double>(f), 0.3, 2) == Word{L, R});
  CHECK(itinerary(f, P, Rational(2, 7), 3) == Word{L, R, R});
  auto id = identity_map();
  CHECK(itinerary(id, natural_partition<double>(id), 0.5, 3) == Word{0, 0, 0});
  CHECK_THROWS_AS(itinerary(f, P, Rational(1, 2), 2), BoundaryHitError);
}

TEST_CASE("points lie in the cylinder of their itinerary") {
  std::mt19937_64 rng(11);
  for (const auto& f : {tent_map(Rational(3, 2)), tent_map(Rational(19, 10)), zigzag()}) {
    auto P = natural_partition<Rational>(f);
    std::uniform_int_distribution<long> num(1, 9999);
    for (int i = 0; i < 100; ++i) {
      Rational x(num(rng), 10007);
      Word w;
      try {
        w = itinerary(f, P, x, 6);
      } catch (const BoundaryHitError&) {
        continue;
      }
      CHECK(is_admissible(f, P, w));
      auto c = cylinder(f, P, w);
      CHECK(c.interval.lo < x);
      CHECK(x < c.interval.hi);
    }
  }
}

TEST_CASE("cylinders nest and images follow the transition law") {
  for (const auto& f : {tent_map(Rational(3, 2)), tent_map(Rational(7, 4)), zigzag()}) {
    auto P = natural_partition<Rational>(f);
    std::vector<Word> frontier{{}};
    for (int depth = 0; depth < 4; ++depth) {
      std::vector<Word> next;
      for (const auto& w : frontier)
        for (int b = 0; b < static_cast<int>(P.size()); ++b) {
          Word wb = w;
          wb.push_back(b);
          if (!is_admissible(f, P, wb)) continue;
          next.push_back(wb);
          if (w.empty()) continue;
          auto parent = cylinder(f, P, w), child = cylinder(f, P, wb);
          CHECK(parent.interval.contains(child.interval));
          // fol(w.B) = f(fol(w) cap B), computed here by hand on one monotone branch.
          auto cut = intersect(parent.image, P.branches[b]);
          auto expected = hull_of(eval(f, cut.lo), eval(f, cut.hi));
          CHECK(follower_image(f, P, wb).same_as(expected));
        }
      frontier = std::move(next);
    }
  }
}

TEST_CASE("finite-depth projections") {
  auto f = tent_map(2);
  auto P = natural_partition<Rational>(f);
  CHECK(project_point(f, P, {L, L}) == Rational(1, 8));
  CHECK(project_letter({L, R, R}) == R);
}
