#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "hofent/builtins.hpp"
#include "hofent/hofbauer.hpp"

using namespace hofent;

namespace {

using Class = std::tuple<int, Rational, Rational>;  // newest letter, image

Class class_of(const DiagramVertex<Rational>& v) { return {v.base, v.image.lo, v.image.hi}; }

// Classes of all admissible words of length <= N, by exhaustive word enumeration.
std::set<Class> brute_classes(const IntervalMap& f, const NaturalPartition<Rational>& P, int N) {
  std::set<Class> out;
  std::vector<Word> frontier{{}};
  for (int n = 1; n <= N; ++n) {
    std::vector<Word> next;
    for (const auto& w : frontier)
      for (int b = 0; b < static_cast<int>(P.size()); ++b) {
        Word wb = w;
        wb.push_back(b);
        if (!is_admissible(f, P, wb)) continue;
        auto img = follower_image(f, P, wb);
        out.insert({b, img.lo, img.hi});
        next.push_back(std::move(wb));
      }
    frontier = std::move(next);
  }
  return out;
}

IntervalMap slow_branch_map() {
  // Second branch has slope -1/20.
  return IntervalMap::from_knots(
      {{Rational(0), Rational(0)}, {Rational(1, 2), Rational(1)}, {Rational(1), Rational(39, 40)}},
      1.0, "slow");
}

}  // namespace

TEST_CASE("full tent at depth one") {
  auto f = tent_map(2);
  auto d = build_diagram<Rational>(f, natural_partition<Rational>(f), 1);
  REQUIRE(d.vertices.size() == 2);
  for (const auto& v : d.vertices) {
    CHECK(v.image.lo == 0);
    CHECK(v.image.hi == 1);
    CHECK(vertex_L(v) == 1.0);
  }
  CHECK(d.edges.size() == 4);
}

TEST_CASE("identity collapses to one looped vertex") {
  auto f = identity_map();
  auto d = build_diagram<Rational>(f, natural_partition<Rational>(f), 3);
  CHECK(d.vertices.size() == 1);
  REQUIRE(d.edges.size() == 1);
  CHECK(d.edges[0] == std::pair<int, int>{0, 0});
}

TEST_CASE("tent of slope 3/2 at depth two, built by hand") {
  auto f = tent_map(Rational(3, 2));
  auto d = build_diagram<Rational>(f, natural_partition<Rational>(f), 2);
  REQUIRE(d.vertices.size() == 3);
  CHECK(class_of(d.vertices[0]) == Class{0, 0, Rational(3, 4)});
  CHECK(class_of(d.vertices[1]) == Class{1, 0, Rational(3, 4)});
  CHECK(class_of(d.vertices[2]) == Class{1, Rational(3, 8), Rational(3, 4)});
  CHECK(vertex_L(d.vertices[0]) == doctest::Approx(0.75));
  std::set<std::pair<int, int>> edges(d.edges.begin(), d.edges.end());
  CHECK(edges == std::set<std::pair<int, int>>{{0, 0}, {0, 2}, {1, 0}, {1, 2}, {2, 2}});
}

TEST_CASE("membership in E_{N,K}") {
  auto f = tent_map(2);
  auto d = build_diagram<Rational>(f, natural_partition<Rational>(f), 1);
  CHECK(in_E_NK(d.vertices[0], 1, 1));
  DiagramVertex<Rational> shorter{{0}, 0, {Rational(0), Rational(2, 5)}, 1};
  CHECK_FALSE(in_E_NK(shorter, 1, 2));
  DiagramVertex<Rational> deep{{0, 0, 0}, 0, {Rational(0), Rational(1)}, 3};
  CHECK_FALSE(in_E_NK(deep, 2, 1));
}

TEST_CASE("branches with large derivative") {
  auto tent = tent_map(2);
  CHECK(partition_subset_Pm(tent, natural_partition<Rational>(tent), 1).size() == 2);
  auto logistic = logistic_map(4.0);
  CHECK(partition_subset_Pm(logistic, natural_partition<double>(logistic), 1).size() == 2);
  auto slow = slow_branch_map();
  CHECK(partition_subset_Pm(slow, natural_partition<Rational>(slow), 10) == std::vector<int>{0});
}

TEST_CASE("vertices and edges match exhaustive word enumeration") {
  for (const char* slope : {"3/2", "13/10", "9/5", "2"}) {
    auto f = tent_map(parse_rational(slope));
    auto P = natural_partition<Rational>(f);
    for (int N = 1; N <= 7; ++N) {
      CAPTURE(slope);
      CAPTURE(N);
      auto d = build_diagram<Rational>(f, P, N);
      auto expected = brute_classes(f, P, N);
      std::set<Class> got;
      std::map<Class, int> id;
      for (std::size_t i = 0; i < d.vertices.size(); ++i) {
        got.insert(class_of(d.vertices[i]));
        id[class_of(d.vertices[i])] = static_cast<int>(i);
      }
      CHECK(got == expected);
      CHECK(got.size() == d.vertices.size());

      std::set<std::pair<int, int>> brute_edges;
      for (const auto& [cls, from] : id)
        for (int b = 0; b < static_cast<int>(P.size()); ++b) {
          auto cut = intersect(Interval<Rational>{std::get<1>(cls), std::get<2>(cls)}, P.branches[b]);
          if (!cut.has_interior()) continue;
          auto img = branch_image(f, cut);
          auto it = id.find({b, img.lo, img.hi});
          if (it != id.end()) brute_edges.insert({from, it->second});
        }
      CHECK(std::set<std::pair<int, int>>(d.edges.begin(), d.edges.end()) == brute_edges);
    }
  }
}

TEST_CASE("structural invariants on every built diagram") {
  std::vector<IntervalMap> maps{tent_map(Rational(3, 2)), tent_map(Rational(9, 5)),
                                logistic_map(3.83), logistic_map(4.0), tangency_map()};
  for (const auto& f : maps) {
    auto P = natural_partition<double>(f);
    double lip = sup_abs_derivative(f, {0.0, 1.0});
    auto small = build_diagram<double>(f, P, 6);
    auto d = build_diagram<double>(f, P, 7);
    CAPTURE(f.name());

    std::vector<int> out_degree(d.vertices.size(), 0);
    for (auto [a, b] : d.edges) {
      ++out_degree[a];
      CHECK(vertex_L(d.vertices[b]) <= lip * vertex_L(d.vertices[a]) + 1e-9);
      CHECK(d.vertices[b].depth <= d.vertices[a].depth + 1);
    }
    for (int deg : out_degree) CHECK(deg <= static_cast<int>(P.size()));

    for (const auto& v : d.vertices) {
      CHECK(v.depth <= 7);
      CHECK(vertex_L(v) > 0.0);
      CHECK(v.image.same_as(follower_image(f, P, v.word)));
      if (v.depth > 1) {
        Word tail(v.word.begin() + 1, v.word.end());
        CHECK_FALSE(follower_image(f, P, tail).same_as(v.image));
      }
    }

    // D_6 embeds in D_7.
    for (const auto& v : small.vertices) {
      bool found = false;
      for (const auto& w : d.vertices) found = found || (w.base == v.base && w.image.same_as(v.image));
      CHECK(found);
    }

    // Letters of words in E_{N,K} lie in P(m) for m > K max(1, |f'|)^N.
    for (int K : {1, 2, 4}) {
      int m = static_cast<int>(K * std::pow(std::max(1.0, lip), 7)) + 1;
      auto Pm = partition_subset_Pm(f, P, m);
      for (const auto& v : d.vertices) {
        if (!in_E_NK(v, 7, K)) continue;
        for (int letter : v.word)
          CHECK(std::find(Pm.begin(), Pm.end(), letter) != Pm.end());
      }
    }
  }
}

TEST_CASE("graph export tags E_{N,K}") {
  auto f = tent_map(Rational(3, 2));
  auto d = build_diagram<Rational>(f, natural_partition<Rational>(f), 2);
  auto g = d.graph(2);
  CHECK(g.size() == 3);
  CHECK(g.edge_count() == 5);
  // L = 3/4, 3/4, 3/8 against the threshold 1/2.
  CHECK(g.tagged("E") == std::vector<int>{0, 1});
}
