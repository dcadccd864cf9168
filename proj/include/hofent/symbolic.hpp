#pragma once

#include <vector>

#include "hofent/maps.hpp"

namespace hofent {

/// Branch indices, oldest letter first.
using Word = std::vector<int>;

template <typename Scalar>
struct Cylinder {
  Interval<Scalar> interval;  // points whose itinerary starts with the word
  Interval<Scalar> image;     // f^len(interval)
  bool empty = false;
};

template <typename Scalar>
Cylinder<Scalar> cylinder(const IntervalMap& map, const NaturalPartition<Scalar>& partition,
                          const Word& word);

/// Non-empty cylinder with non-degenerate image.
template <typename Scalar>
bool is_admissible(const IntervalMap& map, const NaturalPartition<Scalar>& partition,
                   const Word& word);

/// Image interval of the word's cylinder. Two words ending in the same letter
/// with equal follower images have equal follower sets.
template <typename Scalar>
Interval<Scalar> follower_image(const IntervalMap& map, const NaturalPartition<Scalar>& partition,
                                const Word& word);

/// Branches visited by x, f(x), ..., f^{n-1}(x).
template <typename Scalar>
Word itinerary(const IntervalMap& map, const NaturalPartition<Scalar>& partition, const Scalar& x,
               int n);

/// Finite-depth coding projections: the midpoint of the word's cylinder and
/// the branch of the newest letter.
template <typename Scalar>
Scalar project_point(const IntervalMap& map, const NaturalPartition<Scalar>& partition,
                     const Word& word);
int project_letter(const Word& word);

}  // namespace hofent
