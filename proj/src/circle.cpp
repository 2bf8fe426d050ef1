#include "powerseq/circle.hpp"

#include <algorithm>

namespace powerseq {

CirclePoint circle_pow(const CirclePoint& x, const Int& n) {
  return CirclePoint(Rat(n) * x.angle());
}

Rat circle_dist(const CirclePoint& x, const CirclePoint& y) {
  Rat t = x.angle() - y.angle();
  if (t < 0) t = -t;
  Rat w = 1 - t;
  return t <= w ? t : w;
}

std::vector<CirclePoint> nth_roots(const CirclePoint& x, const Int& n) {
  if (n < 1) throw error("nth_roots: n must be >= 1");
  std::vector<CirclePoint> roots;
  roots.reserve(static_cast<std::size_t>(n));
  const Rat& a = x.angle();
  for (Int j = 0; j < n; ++j) {
    roots.push_back(CirclePoint((a + Rat(j)) / Rat(n)));
  }
  return roots;  // (a+j)/n is increasing in j and stays inside [0,1)
}

CirclePoint nearest_root(const CirclePoint& x, const Int& n, const CirclePoint& anchor) {
  if (n < 1) throw error("nearest_root: n must be >= 1");
  // Roots are (a+j)/n for j in [0,n). The minimizer of the circular
  // distance to the anchor is within one step of j0 = floor(n*t - a).
  Rat offset = Rat(n) * anchor.angle() - x.angle();
  Int j0 = rat_floor(offset);
  CirclePoint best;
  Rat best_dist;
  bool have = false;
  for (int delta = -1; delta <= 2; ++delta) {
    Int j = mod_floor(j0 + delta, n);
    CirclePoint root((x.angle() + Rat(j)) / Rat(n));
    Rat d = circle_dist(root, anchor);
    if (!have || d < best_dist || (d == best_dist && root < best)) {
      best = root;
      best_dist = d;
      have = true;
    }
  }
  return best;
}

OrthElement orth_mul(const OrthElement& a, const OrthElement& b) {
  if (!a.flip) return OrthElement{a.angle + b.angle, b.flip};
  return OrthElement{a.angle - b.angle, !b.flip};
}

OrthElement orth_inverse(const OrthElement& g) {
  if (g.flip) return g;  // reflections are involutions
  return OrthElement{g.angle.inverse(), false};
}

OrthElement orth_pow(const OrthElement& g, const Int& n) {
  if (!g.flip) return OrthElement{circle_pow(g.angle, n), false};
  // Reflection: even powers collapse to the identity, odd powers to g.
  return mod_floor(n, 2) == 0 ? OrthElement{} : g;
}

Rat orth_dist(const OrthElement& a, const OrthElement& b) {
  if (a.flip != b.flip) return Rat(1, 2);
  return circle_dist(a.angle, b.angle);
}

bool TorusPoint::is_identity() const {
  return std::all_of(coords.begin(), coords.end(),
                     [](const CirclePoint& c) { return c.is_identity(); });
}

TorusPoint torus_mul(const TorusPoint& a, const TorusPoint& b) {
  if (a.coords.size() != b.coords.size()) throw error("torus_mul: dimension mismatch");
  TorusPoint out;
  out.coords.reserve(a.coords.size());
  for (std::size_t i = 0; i < a.coords.size(); ++i) out.coords.push_back(a.coords[i] + b.coords[i]);
  return out;
}

TorusPoint torus_pow(const TorusPoint& x, const Int& n) {
  TorusPoint out;
  out.coords.reserve(x.coords.size());
  for (const auto& c : x.coords) out.coords.push_back(circle_pow(c, n));
  return out;
}

Rat torus_dist(const TorusPoint& a, const TorusPoint& b) {
  if (a.coords.size() != b.coords.size()) throw error("torus_dist: dimension mismatch");
  Rat best(0);
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    Rat d = circle_dist(a.coords[i], b.coords[i]);
    if (d > best) best = d;
  }
  return best;
}

}  // namespace powerseq
