#include "hofent/hofbauer.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "hofent/error.hpp"

namespace hofent {

namespace {

// Lookup of existing classes. Exact keys for rationals; tolerant scan per
// base letter for doubles.
template <typename Scalar>
class VertexIndex;

template <>
class VertexIndex<Rational> {
 public:
  explicit VertexIndex(std::size_t) {}
  int find(int base, const Interval<Rational>& image) const {
    auto it = index_.find({base, image.lo, image.hi});
    return it == index_.end() ? -1 : it->second;
  }
  void insert(int base, const Interval<Rational>& image, int id) {
    index_.emplace(std::make_tuple(base, image.lo, image.hi), id);
  }

 private:
  std::map<std::tuple<int, Rational, Rational>, int> index_;
};

template <>
class VertexIndex<double> {
 public:
  explicit VertexIndex(std::size_t bases) : buckets_(bases) {}
  int find(int base, const Interval<double>& image) const {
    for (const auto& [iv, id] : buckets_[base])
      if (iv.same_as(image)) return id;
    return -1;
  }
  void insert(int base, const Interval<double>& image, int id) { buckets_[base].push_back({image, id}); }

 private:
  std::vector<std::vector<std::pair<Interval<double>, int>>> buckets_;
};

}  // namespace

template <typename Scalar>
OrientedGraph HofbauerDiagram<Scalar>::graph(int K) const {
  OrientedGraph g;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    std::vector<std::string> tags;
    if (K > 0 && in_E_NK(vertices[i], depth_limit, K)) tags.push_back("E");
    g.add_vertex(std::to_string(i), std::move(tags));
  }
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  return g;
}

template <typename Scalar>
HofbauerDiagram<Scalar> build_diagram(const IntervalMap& map,
                                      const NaturalPartition<Scalar>& partition, int N) {
  if (N < 1) throw InvalidArgument("diagram depth N must be >= 1");
  if (partition.size() == 0) throw InvalidArgument("empty partition");
  const auto& B = partition.branches;

  HofbauerDiagram<Scalar> d;
  d.depth_limit = N;
  d.map_name = map.name();
  VertexIndex<Scalar> index(partition.size());

  auto create = [&](DiagramVertex<Scalar> v) {
    int id = static_cast<int>(d.vertices.size());
    index.insert(v.base, v.image, id);
    d.vertices.push_back(std::move(v));
    return id;
  };

  for (std::size_t b = 0; b < B.size(); ++b) {
    auto image = branch_image(map, B[b]);
    if (!image.has_interior()) continue;
    if (index.find(int(b), image) < 0) create({{int(b)}, int(b), image, 1});
  }

  for (std::size_t head = 0; head < d.vertices.size(); ++head) {
    const auto source = d.vertices[head];
    std::vector<int> targets;
    for (std::size_t b = 0; b < B.size(); ++b) {
      auto part = intersect(source.image, B[b]);
      if (!part.has_interior()) continue;
      auto image = branch_image(map, part);
      if (!image.has_interior()) continue;
      int target = index.find(int(b), image);
      if (target < 0) {
        if (source.depth + 1 > N) continue;
        Word w = source.word;
        w.push_back(int(b));
        target = create({std::move(w), int(b), image, source.depth + 1});
      }
      if (std::find(targets.begin(), targets.end(), target) == targets.end()) {
        targets.push_back(target);
        d.edges.emplace_back(int(head), target);
      }
    }
  }
  return d;
}

template <typename Scalar>
bool in_E_NK(const DiagramVertex<Scalar>& v, int N, int K) {
  if (K < 1) throw InvalidArgument("K must be >= 1");
  if (v.depth > N) return false;
  if constexpr (ScalarTraits<Scalar>::exact) {
    return v.image.length() * K >= 1;
  } else {
    return vertex_L(v) * K >= 1.0 - 1e-12;
  }
}

template <typename Scalar>
std::vector<int> partition_subset_Pm(const IntervalMap& map,
                                     const NaturalPartition<Scalar>& partition, int m) {
  if (m < 1) throw InvalidArgument("m must be >= 1");
  std::vector<int> out;
  for (std::size_t b = 0; b < partition.size(); ++b) {
    double sup = sup_abs_derivative(map, to_double(partition.branches[b]), 1);
    if (sup * m >= 1.0) out.push_back(int(b));
  }
  return out;
}

#define HOFENT_INSTANTIATE(S)                                                               \
  template struct HofbauerDiagram<S>;                                                       \
  template HofbauerDiagram<S> build_diagram(const IntervalMap&, const NaturalPartition<S>&, \
                                            int);                                           \
  template bool in_E_NK(const DiagramVertex<S>&, int, int);                                 \
  template std::vector<int> partition_subset_Pm(const IntervalMap&,                         \
                                                const NaturalPartition<S>&, int);

HOFENT_INSTANTIATE(double)
HOFENT_INSTANTIATE(Rational)
#undef HOFENT_INSTANTIATE

}  // namespace hofent
