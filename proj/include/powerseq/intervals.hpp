#pragma once

#include "powerseq/circle.hpp"
#include "powerseq/rational.hpp"

#include <utility>
#include <vector>

namespace powerseq {

/// Finite union of open intervals inside [0,1) with exact rational
/// endpoints, kept sorted, disjoint and merged. Boundary points are not
/// tracked (they carry no measure); a wraparound arc is stored as a split
/// pair. Carrier of exact Lebesgue measure on the circle.
class IntervalUnion {
 public:
  using Part = std::pair<Rat, Rat>;  // (lo, hi), 0 <= lo < hi <= 1

  IntervalUnion() = default;
  static IntervalUnion empty() { return IntervalUnion(); }
  static IntervalUnion full();
  /// Union of the given parts (may overlap; normalized internally).
  static IntervalUnion of(std::vector<Part> parts);
  /// Open arc of the given radius around a circle point, wrapping mod 1.
  static IntervalUnion around(const CirclePoint& center, const Rat& radius);

  const std::vector<Part>& parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool is_empty() const { return parts_.empty(); }

  Rat measure() const;
  bool contains(const Rat& theta) const;  // open-interval membership, theta in [0,1)
  IntervalUnion translated(const Rat& shift) const;

  friend IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b);
  friend IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b);
  friend bool operator==(const IntervalUnion& a, const IntervalUnion& b) {
    return a.parts_ == b.parts_;
  }

 private:
  std::vector<Part> parts_;
};

/// {theta in [0,1) : d(n*theta mod 1, 0) < eps}: n arcs of width 2*eps/n
/// centered at the n-th roots of unity; total measure exactly 2*eps for
/// eps < 1/2.
IntervalUnion near_one_preimage(const Int& n, const Rat& eps);

}  // namespace powerseq
