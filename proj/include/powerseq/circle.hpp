#pragma once

#include "powerseq/rational.hpp"

#include <compare>
#include <vector>

namespace powerseq {

/// Point of the circle group R/Z, stored as a reduced rational angle in
/// [0,1), measured in turns (the full circle has length 1). Every
/// representable point is torsion; its order equals the reduced
/// denominator of the angle.
class CirclePoint {
 public:
  CirclePoint() : angle_(0) {}
  explicit CirclePoint(const Rat& angle) : angle_(frac(angle)) {}
  static CirclePoint from(const Int& num, const Int& den) { return CirclePoint(Rat(num, den)); }

  const Rat& angle() const { return angle_; }
  Int order() const { return rat_den(angle_); }
  bool is_identity() const { return angle_ == 0; }

  CirclePoint operator+(const CirclePoint& o) const { return CirclePoint(angle_ + o.angle_); }
  CirclePoint operator-(const CirclePoint& o) const { return CirclePoint(angle_ - o.angle_); }
  CirclePoint inverse() const { return CirclePoint(-angle_); }

  friend bool operator==(const CirclePoint& a, const CirclePoint& b) { return a.angle_ == b.angle_; }
  friend bool operator!=(const CirclePoint& a, const CirclePoint& b) { return a.angle_ != b.angle_; }
  friend bool operator<(const CirclePoint& a, const CirclePoint& b) { return a.angle_ < b.angle_; }

 private:
  Rat angle_;  // in [0,1), canonical
};

/// x^n with exact angle arithmetic: frac(n * angle). Negative n gives the
/// inverse power.
CirclePoint circle_pow(const CirclePoint& x, const Int& n);

/// Normalized circle metric: min(|a-b|, 1-|a-b|), values in [0, 1/2].
Rat circle_dist(const CirclePoint& x, const CirclePoint& y);

/// The n points y with y^n = x, sorted by angle. Consecutive roots are
/// exactly 1/n apart.
std::vector<CirclePoint> nth_roots(const CirclePoint& x, const Int& n);

/// Root of x under y -> y^n closest to `anchor`; ties resolve toward the
/// smaller angle. The result is within 1/(2n) of the anchor.
CirclePoint nearest_root(const CirclePoint& x, const Int& n, const CirclePoint& anchor);

/// Element of O(2): a rotation when flip is false, a reflection otherwise.
struct OrthElement {
  CirclePoint angle;
  bool flip = false;

  bool is_identity() const { return !flip && angle.is_identity(); }
  friend bool operator==(const OrthElement& a, const OrthElement& b) {
    return a.flip == b.flip && a.angle == b.angle;
  }
};

// Group law: (a,rot)(b,f) = (a+b,f); (a,refl)(b,rot) = (a-b,refl);
// (a,refl)(b,refl) = (a-b,rot).
OrthElement orth_mul(const OrthElement& a, const OrthElement& b);
OrthElement orth_inverse(const OrthElement& g);
OrthElement orth_pow(const OrthElement& g, const Int& n);

/// Metric on O(2): circle_dist on the shared component, 1/2 across
/// components. Bi-invariant; enough for epsilon tests with eps < 1/2.
Rat orth_dist(const OrthElement& a, const OrthElement& b);

/// Element of a finite torus power T^k, componentwise group law.
struct TorusPoint {
  std::vector<CirclePoint> coords;

  static TorusPoint identity(std::size_t k) { return TorusPoint{std::vector<CirclePoint>(k)}; }
  bool is_identity() const;
  friend bool operator==(const TorusPoint& a, const TorusPoint& b) { return a.coords == b.coords; }
};

TorusPoint torus_mul(const TorusPoint& a, const TorusPoint& b);
TorusPoint torus_pow(const TorusPoint& x, const Int& n);
Rat torus_dist(const TorusPoint& a, const TorusPoint& b);  // max metric

}  // namespace powerseq
