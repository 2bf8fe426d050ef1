#include "powerseq/intervals.hpp"

#include <algorithm>

namespace powerseq {

IntervalUnion IntervalUnion::full() {
  IntervalUnion u;
  u.parts_.emplace_back(Rat(0), Rat(1));
  return u;
}

IntervalUnion IntervalUnion::of(std::vector<Part> parts) {
  for (auto& [lo, hi] : parts) {
    if (lo < 0 || hi > 1 || lo >= hi) throw error("IntervalUnion: bad part");
  }
  std::sort(parts.begin(), parts.end());
  IntervalUnion u;
  for (auto& p : parts) {
    if (!u.parts_.empty() && p.first <= u.parts_.back().second) {
      if (p.second > u.parts_.back().second) u.parts_.back().second = p.second;
    } else {
      u.parts_.push_back(std::move(p));
    }
  }
  return u;
}

IntervalUnion IntervalUnion::around(const CirclePoint& center, const Rat& radius) {
  if (radius <= 0) return empty();
  if (radius >= Rat(1, 2)) return full();
  Rat lo = center.angle() - radius;
  Rat hi = center.angle() + radius;
  std::vector<Part> parts;
  if (lo < 0) {
    parts.emplace_back(lo + 1, Rat(1));
    parts.emplace_back(Rat(0), hi);
  } else if (hi > 1) {
    parts.emplace_back(lo, Rat(1));
    parts.emplace_back(Rat(0), hi - 1);
  } else {
    parts.emplace_back(lo, hi);
  }
  return of(std::move(parts));
}

Rat IntervalUnion::measure() const {
  Rat total(0);
  for (const auto& [lo, hi] : parts_) total += hi - lo;
  return total;
}

bool IntervalUnion::contains(const Rat& theta) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), theta,
                             [](const Rat& t, const Part& p) { return t < p.first; });
  if (it == parts_.begin()) return false;
  --it;
  return it->first < theta && theta < it->second;
}

IntervalUnion IntervalUnion::translated(const Rat& shift) const {
  std::vector<Part> parts;
  parts.reserve(parts_.size() + 1);
  for (const auto& [lo, hi] : parts_) {
    Rat nlo = frac(lo + shift);
    Rat nhi = nlo + (hi - lo);
    if (nhi > 1) {
      parts.emplace_back(nlo, Rat(1));
      parts.emplace_back(Rat(0), nhi - 1);
    } else {
      parts.emplace_back(nlo, nhi);
    }
  }
  return of(std::move(parts));
}

IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b) {
  IntervalUnion out;
  std::size_t i = 0, j = 0;
  while (i < a.parts_.size() && j < b.parts_.size()) {
    const auto& [alo, ahi] = a.parts_[i];
    const auto& [blo, bhi] = b.parts_[j];
    Rat lo = std::max(alo, blo);
    Rat hi = std::min(ahi, bhi);
    if (lo < hi) out.parts_.emplace_back(lo, hi);
    if (ahi <= bhi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b) {
  std::vector<IntervalUnion::Part> parts = a.parts_;
  parts.insert(parts.end(), b.parts_.begin(), b.parts_.end());
  return IntervalUnion::of(std::move(parts));
}

IntervalUnion near_one_preimage(const Int& n, const Rat& eps) {
  if (n < 1) throw error("near_one_preimage: n must be >= 1");
  if (eps <= 0 || eps > Rat(1, 2)) throw error("near_one_preimage: eps must be in (0, 1/2]");
  Rat radius = eps / Rat(n);
  std::vector<IntervalUnion::Part> parts;
  for (Int j = 0; j < n; ++j) {
    Rat center(j, n);
    Rat lo = center - radius;
    Rat hi = center + radius;
    if (lo < 0) {
      parts.emplace_back(lo + 1, Rat(1));
      parts.emplace_back(Rat(0), hi);
    } else if (hi > 1) {
      parts.emplace_back(lo, Rat(1));
      parts.emplace_back(Rat(0), hi - 1);
    } else {
      parts.emplace_back(lo, hi);
    }
  }
  return IntervalUnion::of(std::move(parts));
}

}  // namespace powerseq
