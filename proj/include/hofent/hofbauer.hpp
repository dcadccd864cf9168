#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hofent/graphs.hpp"
#include "hofent/maps.hpp"
#include "hofent/symbolic.hpp"

namespace hofent {

template <typename Scalar>
struct DiagramVertex {
  Word word;                // shortest word reaching this class
  int base = 0;             // newest letter
  Interval<Scalar> image;   // follower image
  int depth = 1;            // word length
};

template <typename Scalar>
struct HofbauerDiagram {
  std::vector<DiagramVertex<Scalar>> vertices;  // breadth-first discovery order
  std::vector<std::pair<int, int>> edges;
  int depth_limit = 1;
  std::string map_name;

  /// Same vertices and edges; vertices in E_{N,K} tagged "E" when K > 0.
  OrientedGraph graph(int K = 0) const;
};

/// Truncated diagram: classes (newest letter, image interval) of admissible
/// words of length <= N. Successors beyond depth N are not created.
template <typename Scalar>
HofbauerDiagram<Scalar> build_diagram(const IntervalMap& map,
                                      const NaturalPartition<Scalar>& partition, int N);

template <typename Scalar>
double vertex_L(const DiagramVertex<Scalar>& v) {
  return ScalarTraits<Scalar>::to_double(v.image.length());
}

/// depth <= N and length of the image >= 1/K.
template <typename Scalar>
bool in_E_NK(const DiagramVertex<Scalar>& v, int N, int K);

/// Branches on whose closure sup |f'| >= 1/m.
template <typename Scalar>
std::vector<int> partition_subset_Pm(const IntervalMap& map,
                                     const NaturalPartition<Scalar>& partition, int m);

}  // namespace hofent
