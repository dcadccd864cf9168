#include "hofent/symbolic.hpp"

#include "hofent/error.hpp"

namespace hofent {

namespace {

template <typename Scalar>
void check_letters(const NaturalPartition<Scalar>& partition, const Word& word) {
  if (word.empty()) throw InvalidArgument("word must be non-empty");
  for (int letter : word)
    if (letter < 0 || static_cast<std::size_t>(letter) >= partition.size())
      throw PartitionMismatchError("unknown branch id " + std::to_string(letter));
}

}  // namespace

template <typename Scalar>
Cylinder<Scalar> cylinder(const IntervalMap& map, const NaturalPartition<Scalar>& partition,
                          const Word& word) {
  check_letters(partition, word);
  Cylinder<Scalar> out;
  const auto& B = partition.branches;

  // Forward: the set of f^k-positions reachable along the word.
  Interval<Scalar> current = B[word[0]];
  for (std::size_t k = 1; k < word.size(); ++k) {
    Interval<Scalar> moved = branch_image(map, current);
    current = intersect(moved, B[word[k]]);
    if (!current.has_interior()) {
      out.empty = true;
      return out;
    }
  }
  out.image = branch_image(map, current);

  // Backward: pull the last position set back through each branch.
  Interval<Scalar> set = current;
  for (std::size_t k = word.size() - 1; k-- > 0;) {
    const int b = word[k];
    Scalar a = branch_preimage(map, B[b], partition.direction[b], set.lo);
    Scalar c = branch_preimage(map, B[b], partition.direction[b], set.hi);
    set = intersect(hull_of(a, c), B[b]);
  }
  out.interval = set;
  out.empty = !set.has_interior();
  return out;
}

template <typename Scalar>
bool is_admissible(const IntervalMap& map, const NaturalPartition<Scalar>& partition,
                   const Word& word) {
  auto cyl = cylinder(map, partition, word);
  return !cyl.empty && cyl.image.has_interior();
}

template <typename Scalar>
Interval<Scalar> follower_image(const IntervalMap& map, const NaturalPartition<Scalar>& partition,
                                const Word& word) {
  auto cyl = cylinder(map, partition, word);
  if (cyl.empty || !cyl.image.has_interior()) throw AdmissibilityError("word is not admissible");
  return intersect(cyl.image, branch_image(map, partition.branches[word.back()]));
}

template <typename Scalar>
Word itinerary(const IntervalMap& map, const NaturalPartition<Scalar>& partition, const Scalar& x,
               int n) {
  using T = ScalarTraits<Scalar>;
  Word w;
  Scalar y = x;
  for (int k = 0; k < n; ++k) {
    int b = partition.find(y);
    if (b < 0 || T::equal(y, partition.branches[b].lo) || T::equal(y, partition.branches[b].hi))
      throw BoundaryHitError("orbit meets a partition boundary at step " + std::to_string(k));
    w.push_back(b);
    if (k + 1 < n) y = eval(map, y);
  }
  return w;
}

template <typename Scalar>
Scalar project_point(const IntervalMap& map, const NaturalPartition<Scalar>& partition,
                     const Word& word) {
  auto cyl = cylinder(map, partition, word);
  if (cyl.empty) throw AdmissibilityError("empty cylinder has no representative point");
  return ScalarTraits<Scalar>::midpoint(cyl.interval.lo, cyl.interval.hi);
}

int project_letter(const Word& word) {
  if (word.empty()) throw InvalidArgument("word must be non-empty");
  return word.back();
}

#define HOFENT_INSTANTIATE(S)                                                                  \
  template Cylinder<S> cylinder(const IntervalMap&, const NaturalPartition<S>&, const Word&);  \
  template bool is_admissible(const IntervalMap&, const NaturalPartition<S>&, const Word&);    \
  template Interval<S> follower_image(const IntervalMap&, const NaturalPartition<S>&,          \
                                      const Word&);                                            \
  template Word itinerary(const IntervalMap&, const NaturalPartition<S>&, const S&, int);      \
  template S project_point(const IntervalMap&, const NaturalPartition<S>&, const Word&);

HOFENT_INSTANTIATE(double)
HOFENT_INSTANTIATE(Rational)
#undef HOFENT_INSTANTIATE

}  // namespace hofent
