#include "powerseq/omega_sets.hpp"

#include <algorithm>

namespace powerseq {

DensityVerdict DensityVerdict::zero(std::string proof) {
  return DensityVerdict{Kind::Zero, Rat(0), Rat(0), Rat(0), std::move(proof), Int(0)};
}
DensityVerdict DensityVerdict::one(std::string proof) {
  return DensityVerdict{Kind::One, Rat(1), Rat(1), Rat(1), std::move(proof), Int(0)};
}
DensityVerdict DensityVerdict::of(const Rat& v, std::string proof) {
  if (v == 0) return zero(std::move(proof));
  if (v == 1) return one(std::move(proof));
  return DensityVerdict{Kind::Value, v, v, v, std::move(proof), Int(0)};
}

namespace {

const Int kMaxPeriod = Int(1) << 20;
const Int kMaxThreshold = Int(1) << 17;
constexpr std::uint64_t kMaxWalk = 4'000'000;

bool is_full_omega(const OmegaSet& s) {
  return (s.kind() == SetKind::Multiples && s.modulus() == 1) ||
         (s.kind() == SetKind::Arithmetic && s.first_term() == 0 && s.step() == 1);
}

bool pf_tail_contains(const PeriodicForm& f, const Int& n) {
  return std::binary_search(f.residues.begin(), f.residues.end(), mod_floor(n, f.modulus));
}

bool pf_contains(const PeriodicForm& f, const Int& n) {
  if (n < 0) return false;
  if (n < f.threshold) return std::binary_search(f.prefix.begin(), f.prefix.end(), n);
  return pf_tail_contains(f, n);
}

std::vector<Int> pf_lift(const std::vector<Int>& rs, const Int& from_mod, const Int& to_mod) {
  std::vector<Int> out;
  for (Int base = 0; base < to_mod; base += from_mod)
    for (const Int& r : rs) out.push_back(base + r);
  std::sort(out.begin(), out.end());
  return out;
}

// Ascending walk over the elements of a periodic form, strictly below `limit`.
template <typename Fn>
bool pf_walk(const PeriodicForm& f, const Int& limit, Fn&& fn) {
  std::uint64_t steps = 0;
  for (const Int& p : f.prefix) {
    if (p >= limit) return true;
    if (!fn(p)) return false;
    if (++steps > kMaxWalk) throw resource_error("periodic walk exceeded step cap");
  }
  if (f.residues.empty()) return true;
  Int base = floor_div(f.threshold, f.modulus) * f.modulus;
  for (;; base += f.modulus) {
    for (const Int& r : f.residues) {
      Int v = base + r;
      if (v < f.threshold) continue;
      if (v >= limit) return true;
      if (!fn(v)) return false;
      if (++steps > kMaxWalk) throw resource_error("periodic walk exceeded step cap");
    }
  }
}

std::optional<PeriodicForm> pf_of(const OmegaSet& s);

std::optional<PeriodicForm> pf_combine(const PeriodicForm& a, const PeriodicForm& b, SetKind op) {
  Int m = lcm_int(a.modulus, b.modulus);
  if (m > kMaxPeriod) return std::nullopt;
  Int t = std::max(a.threshold, b.threshold);
  if (t > kMaxThreshold) return std::nullopt;
  auto ra = pf_lift(a.residues, a.modulus, m);
  auto rb = pf_lift(b.residues, b.modulus, m);
  auto keep = [op](bool ia, bool ib) {
    switch (op) {
      case SetKind::Union: return ia || ib;
      case SetKind::Intersection: return ia && ib;
      default: return ia && !ib;
    }
  };
  PeriodicForm out{m, {}, t, {}};
  for (Int r = 0; r < m; ++r) {
    if (keep(std::binary_search(ra.begin(), ra.end(), r), std::binary_search(rb.begin(), rb.end(), r)))
      out.residues.push_back(r);
  }
  for (Int n = 0; n < t; ++n) {
    if (keep(pf_contains(a, n), pf_contains(b, n))) out.prefix.push_back(n);
  }
  return out;
}

std::optional<PeriodicForm> pf_tail(const PeriodicForm& f, std::size_t drop) {
  // Locate the drop-th element, then keep elements from it onward.
  std::optional<Int> cut;
  std::size_t idx = 0;
  // Beyond the threshold every period contributes at least one element, so
  // drop+1 periods are enough to reach the cut element.
  Int limit = f.threshold + f.modulus * Int(drop + 1) + 1;
  pf_walk(f, limit, [&](const Int& v) {
    if (idx == drop) {
      cut = v;
      return false;
    }
    ++idx;
    return true;
  });
  if (!cut) {  // fewer than drop+1 elements: empty set
    return PeriodicForm{Int(1), {}, Int(0), {}};
  }
  PeriodicForm out{f.modulus, f.residues, std::max(f.threshold, *cut), {}};
  if (out.threshold > kMaxThreshold) return std::nullopt;
  pf_walk(f, out.threshold, [&](const Int& v) {
    if (v >= *cut) out.prefix.push_back(v);
    return true;
  });
  return out;
}

std::optional<PeriodicForm> pf_strided(const PeriodicForm& f, std::size_t offset, std::size_t stride) {
  const std::size_t c = f.residues.size();
  if (c == 0) {  // finite set held in the prefix
    PeriodicForm out{Int(1), {}, f.threshold, {}};
    for (std::size_t i = offset; i < f.prefix.size(); i += stride) out.prefix.push_back(f.prefix[i]);
    return out;
  }
  Int g = gcd(Int(stride), Int(c));
  Int super = f.modulus * (Int(stride) / g);
  if (super > kMaxPeriod) return std::nullopt;
  // Selection by index is super-periodic in the value beyond the threshold.
  PeriodicForm out{super, {}, f.threshold, {}};
  std::size_t idx = 0;
  Int limit = f.threshold + super;
  pf_walk(f, limit, [&](const Int& v) {
    bool selected = idx >= offset && (idx - offset) % stride == 0;
    ++idx;
    if (!selected) return true;
    if (v < f.threshold)
      out.prefix.push_back(v);
    else
      out.residues.push_back(mod_floor(v, super));
    return true;
  });
  std::sort(out.residues.begin(), out.residues.end());
  return out;
}

std::optional<PeriodicForm> pf_of(const OmegaSet& s) {
  switch (s.kind()) {
    case SetKind::Multiples:
      return PeriodicForm{s.modulus(), {Int(0)}, Int(0), {}};
    case SetKind::Arithmetic:
      return PeriodicForm{s.step(), {mod_floor(s.first_term(), s.step())}, s.first_term(), {}};
    case SetKind::Residues:
      return PeriodicForm{s.modulus(), s.values(), Int(0), {}};
    case SetKind::Explicit: {
      Int t = s.values().empty() ? Int(0) : s.values().back() + 1;
      if (t > kMaxThreshold) return std::nullopt;
      return PeriodicForm{Int(1), {}, t, s.values()};
    }
    case SetKind::Union:
    case SetKind::Intersection:
    case SetKind::Difference: {
      auto a = pf_of(s.left());
      if (!a) return std::nullopt;
      auto b = pf_of(s.right());
      if (!b) return std::nullopt;
      return pf_combine(*a, *b, s.kind());
    }
    case SetKind::Tail: {
      auto f = pf_of(s.left());
      if (!f) return std::nullopt;
      return pf_tail(*f, s.drop_count());
    }
    case SetKind::Strided: {
      auto f = pf_of(s.left());
      if (!f) return std::nullopt;
      return pf_strided(*f, s.stride_offset(), s.stride_step());
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

// Subset relations (tail, stride, intersection, difference) preserve the
// k!+c shape of the elements.
std::optional<Int> factorial_subset_shift(const OmegaSet& s) {
  switch (s.kind()) {
    case SetKind::Factorial:
      return Int(0);
    case SetKind::FactorialShift:
      return s.shift();
    case SetKind::Tail:
    case SetKind::Strided:
      return factorial_subset_shift(s.left());
    case SetKind::Intersection: {
      if (auto c = factorial_subset_shift(s.left())) return c;
      return factorial_subset_shift(s.right());
    }
    case SetKind::Difference:
      return factorial_subset_shift(s.left());
    case SetKind::Union: {
      auto a = factorial_subset_shift(s.left());
      auto b = factorial_subset_shift(s.right());
      if (a && b && *a == *b) return a;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::optional<PeriodicForm> periodic_form(const OmegaSet& s) {
  try {
    return pf_of(s);
  } catch (const resource_error&) {
    return std::nullopt;
  }
}

std::optional<FactorialFamilyForm> factorial_family_form(const OmegaSet& s) {
  switch (s.kind()) {
    case SetKind::Factorial:
      return FactorialFamilyForm{Int(0), 1};
    case SetKind::FactorialShift:
      if (!s.has_domain() || is_full_omega(s.domain())) return FactorialFamilyForm{s.shift(), 1};
      return std::nullopt;
    case SetKind::Tail: {
      auto inner = factorial_family_form(s.left());
      if (inner) inner->k_start += static_cast<unsigned>(s.drop_count());
      return inner;
    }
    default:
      return std::nullopt;
  }
}

std::optional<GeometricForm> geometric_form(const OmegaSet& s) {
  switch (s.kind()) {
    case SetKind::Powers:
      return GeometricForm{s.base(), 0, 1};
    case SetKind::Tail: {
      auto g = geometric_form(s.left());
      if (g) g->lead += static_cast<unsigned>(s.drop_count()) * g->step;
      return g;
    }
    case SetKind::Strided: {
      auto g = geometric_form(s.left());
      if (g) {
        g->lead += static_cast<unsigned>(s.stride_offset()) * g->step;
        g->step *= static_cast<unsigned>(s.stride_step());
      }
      return g;
    }
    default:
      return std::nullopt;
  }
}

// --- density -----------------------------------------------------------------

std::optional<ExactDensity> exact_density(const OmegaSet& s) {
  switch (s.kind()) {
    case SetKind::Factorial:
    case SetKind::FactorialShift:
      return ExactDensity{Rat(0), "factorial-scale gap growth forces density 0"};
    case SetKind::Powers:
      return ExactDensity{Rat(0), "geometric growth forces density 0"};
    case SetKind::Explicit:
      return ExactDensity{Rat(0), "finite set"};
    case SetKind::Multiples:
      return ExactDensity{Rat(1, s.modulus()),
                          s.modulus() == 1 ? "all of omega" : "arithmetic progression"};
    case SetKind::Arithmetic:
      return ExactDensity{Rat(1, s.step()), "arithmetic progression"};
    case SetKind::Residues:
      return ExactDensity{Rat(Int(s.values().size()), s.modulus()), "periodic residue classes"};
    case SetKind::Tail: {
      auto e = exact_density(s.left());
      if (e) e->proof += " (finite modification)";
      return e;
    }
    case SetKind::Strided: {
      auto e = exact_density(s.left());
      if (e) {
        e->value /= Int(s.stride_step());
        e->proof += "; stride selects every " + std::to_string(s.stride_step()) + "th element";
      }
      return e;
    }
    case SetKind::Union: {
      auto a = exact_density(s.left());
      auto b = exact_density(s.right());
      if ((a && a->value == 1) || (b && b->value == 1))
        return ExactDensity{Rat(1), "superset of a density-1 set"};
      if (a && b) {
        if (a->value == 0) return ExactDensity{b->value, b->proof + "; other side is a null set"};
        if (b->value == 0) return ExactDensity{a->value, a->proof + "; other side is a null set"};
      }
      break;
    }
    case SetKind::Intersection: {
      auto a = exact_density(s.left());
      auto b = exact_density(s.right());
      if (a && a->value == 0) return ExactDensity{Rat(0), "subset of a null set"};
      if (b && b->value == 0) return ExactDensity{Rat(0), "subset of a null set"};
      if (a && b) {
        if (a->value == 1) return ExactDensity{b->value, b->proof + "; intersected with a density-1 set"};
        if (b->value == 1) return ExactDensity{a->value, a->proof + "; intersected with a density-1 set"};
      }
      break;
    }
    case SetKind::Difference: {
      auto a = exact_density(s.left());
      auto b = exact_density(s.right());
      if (a && a->value == 0) return ExactDensity{Rat(0), "subset of a null set"};
      if (b && b->value == 0 && a) return ExactDensity{a->value, a->proof + "; removed set is null"};
      if (b && b->value == 1) return ExactDensity{Rat(0), "complement of a density-1 set"};
      break;
    }
    default:
      break;
  }
  if (auto pf = periodic_form(s)) {
    return ExactDensity{Rat(Int(pf->residues.size()), pf->modulus), "eventually periodic"};
  }
  return std::nullopt;
}

DensityVerdict density(const OmegaSet& s, const Int& horizon) {
  if (horizon < 1) throw error("density: horizon must be >= 1");
  if (auto e = exact_density(s)) {
    return DensityVerdict::of(e->value, e->proof);
  }
  EnumBudget budget;
  budget.value_cap = horizon;  // cap 0 is the no-cap sentinel; trim below
  std::vector<Int> elems;
  bool truncated = false;
  try {
    SetEnumerator en(s, budget);
    while (auto v = en.next()) {
      if (*v >= horizon) break;
      elems.push_back(std::move(*v));
    }
  } catch (const resource_error&) {
    truncated = true;
  }
  Int h = horizon;
  if (truncated) h = elems.empty() ? Int(1) : elems.back() + 1;

  DensityVerdict v{DensityVerdict::Kind::Empirical, Rat(Int(elems.size()), h), Rat(0), Rat(0),
                   truncated ? "window estimate (truncated by budget)" : "window estimate", h};
  // liminf/limsup trackers over checkpoints in the second half of the window
  Rat lo(1), hi(0);
  bool seen = false;
  for (int i = 8; i <= 16; ++i) {
    Int cp = h * i / 16;
    if (cp < 1) continue;
    auto it = std::upper_bound(elems.begin(), elems.end(), cp - 1);
    Rat ratio(Int(it - elems.begin()), cp);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    seen = true;
  }
  if (seen) {
    v.liminf = lo;
    v.limsup = hi;
  }
  return v;
}

// --- divisibility -------------------------------------------------------------

namespace {

// Smallest k >= 1 with m | k!, or nullopt past the search cap.
std::optional<unsigned> min_k_factorial_divisible(const Int& m) {
  Int f_mod = 1 % m;
  for (unsigned k = 1; k <= 2'000'000; ++k) {
    f_mod = f_mod * k % m;
    if (f_mod == 0) return k;
  }
  return std::nullopt;
}

struct ProfileCore {
  DivisibilityProfile::Count count;
  Int threshold;  // Finite: every element >= threshold is divisible (-1: enumerate all)
  std::string reason;
};

std::optional<ProfileCore> profile_core(const OmegaSet& s, const Int& m) {
  using Count = DivisibilityProfile::Count;
  if (s.certified_finite()) return ProfileCore{Count::Finite, Int(-1), "finite set"};

  if (auto c = factorial_subset_shift(s)) {
    if (mod_floor(*c, m) == 0) {
      auto k = min_k_factorial_divisible(m);
      if (k) {
        return ProfileCore{Count::Finite, factorial(*k) + *c,
                           "elements are k!+c with m | c, and m | k! for all large k"};
      }
    } else if (s.certified_infinite()) {
      return ProfileCore{Count::Infinite, Int(0),
                         "elements are k!+c with k unbounded; k!+c = c (mod m) once m | k!, and m does not divide c"};
    }
  }

  if (auto g = geometric_form(s)) {
    Int r = m;
    unsigned j = 0;
    for (;;) {
      Int gg = gcd(r, g->base);
      if (gg == 1) break;
      r /= gg;
      ++j;
    }
    if (r == 1) {
      Int thr = 1;
      for (unsigned i = 0; i < j; ++i) thr *= g->base;
      return ProfileCore{Count::Finite, thr, "every sufficiently high power of the base is divisible"};
    }
    return ProfileCore{Count::Infinite, Int(0), "m has a prime factor coprime to the base"};
  }

  if (auto pf = periodic_form(s)) {
    if (pf->residues.empty()) return ProfileCore{Count::Finite, pf->threshold, "finite set"};
    bool all_divisible = mod_floor(pf->modulus, m) == 0;
    if (all_divisible) {
      for (const Int& r : pf->residues) {
        if (mod_floor(r, m) != 0) {
          all_divisible = false;
          break;
        }
      }
    }
    if (all_divisible)
      return ProfileCore{Count::Finite, pf->threshold, "all recurring residue classes divisible"};
    return ProfileCore{Count::Infinite, Int(0), "a recurring residue class escapes divisibility"};
  }

  switch (s.kind()) {
    case SetKind::Union: {
      auto a = profile_core(s.left(), m);
      auto b = profile_core(s.right(), m);
      if ((a && a->count == Count::Infinite) || (b && b->count == Count::Infinite))
        return ProfileCore{Count::Infinite, Int(0), "one side has infinitely many non-divisible elements"};
      if (a && b && a->count == Count::Finite && b->count == Count::Finite)
        return ProfileCore{Count::Finite, std::max(a->threshold, b->threshold),
                           "both sides eventually divisible"};
      return std::nullopt;
    }
    case SetKind::Intersection: {
      auto a = profile_core(s.left(), m);
      if (a && a->count == Count::Finite) return a;
      auto b = profile_core(s.right(), m);
      if (b && b->count == Count::Finite) return b;
      return std::nullopt;
    }
    case SetKind::Difference:
    case SetKind::Tail: {
      auto a = profile_core(s.left(), m);
      if (a && a->count == Count::Finite) return a;
      if (a && a->count == Count::Infinite) {
        if (s.kind() == SetKind::Tail) return a;
        // removing a finite set keeps infinitely many exceptions
        if (s.right().certified_finite()) return a;
      }
      return std::nullopt;
    }
    case SetKind::Strided: {
      auto a = profile_core(s.left(), m);
      if (a && a->count == Count::Finite) return a;  // subset keeps the divisible tail
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

DivisibilityProfile divisibility_profile(const OmegaSet& s, const Int& m) {
  if (m < 2) throw error("divisibility_profile: modulus must be >= 2");
  auto core = profile_core(s, m);
  if (!core) {
    return DivisibilityProfile{DivisibilityProfile::Count::Unknown, 0, {},
                               "no closed-form rule applies to this descriptor"};
  }
  if (core->count == DivisibilityProfile::Count::Infinite) {
    DivisibilityProfile p{DivisibilityProfile::Count::Infinite, 0, {}, core->reason};
    try {  // attach a few re-checkable witnesses
      EnumBudget b;
      b.max_steps = 100'000;
      SetEnumerator en(s, b);
      while (auto v = en.next()) {
        if (mod_floor(*v, m) != 0) {
          p.exceptions.push_back(*v);
          if (p.exceptions.size() == 3) break;
        }
      }
    } catch (const resource_error&) {
    }
    return p;
  }
  // Finite: localize the exceptions below the certified threshold.
  DivisibilityProfile p{DivisibilityProfile::Count::Finite, 0, {}, core->reason};
  EnumBudget b;
  if (core->threshold >= 0) {
    if (core->threshold == 0) return p;
    b.value_cap = core->threshold;
  }
  std::size_t idx = 0, last_exc = 0;
  bool any = false;
  try {
    SetEnumerator en(s, b);
    while (auto v = en.next()) {
      if (core->threshold >= 0 && *v >= core->threshold) break;
      if (mod_floor(*v, m) != 0) {
        p.exceptions.push_back(*v);
        last_exc = idx;
        any = true;
      }
      ++idx;
    }
  } catch (const resource_error&) {
    return DivisibilityProfile{DivisibilityProfile::Count::Unknown, 0, std::move(p.exceptions),
                               "budget exhausted while localizing the finitely many exceptions"};
  }
  if (any) p.exception_index_bound = last_exc + 1;
  return p;
}

// --- thinness / Hadamard -------------------------------------------------------

namespace {

std::optional<Int> first_element(const OmegaSet& s) {
  auto v = s.enumerate(1);
  if (v.empty()) return std::nullopt;
  return v[0];
}

std::vector<Rat> ratio_trace(const OmegaSet& s, std::size_t pairs) {
  std::vector<Rat> out;
  try {
    auto elems = s.enumerate(pairs + 1);
    for (std::size_t i = 0; i + 1 < elems.size(); ++i) {
      if (elems[i] > 0) out.emplace_back(elems[i], elems[i + 1]);
    }
  } catch (const resource_error&) {
  }
  return out;
}

}  // namespace

ThinVerdict is_thin(const OmegaSet& s) {
  if (!s.certified_infinite()) throw error("is_thin: set is not certified infinite");
  auto first = first_element(s);
  if (first && *first == 0) {
    return ThinVerdict{ThinVerdict::Result::No,
                       "first element is 0; thinness requires positive elements (tail-shift first)",
                       {}};
  }
  if (factorial_subset_shift(s)) {
    return ThinVerdict{ThinVerdict::Result::Yes,
                       "elements are k!+c with k unbounded; consecutive ratios are at most "
                       "(k!+c)/((k+1)!+c) -> 0",
                       ratio_trace(s, 8)};
  }
  if (auto g = geometric_form(s)) {
    Int q = 1;
    for (unsigned i = 0; i < g->step; ++i) q *= g->base;
    return ThinVerdict{ThinVerdict::Result::No,
                       "constant consecutive ratio 1/" + q.str() + " does not tend to 0",
                       ratio_trace(s, 8)};
  }
  if (periodic_form(s)) {
    return ThinVerdict{ThinVerdict::Result::No,
                       "eventually periodic set has bounded gaps, so ratios tend to 1",
                       ratio_trace(s, 8)};
  }
  return ThinVerdict{ThinVerdict::Result::Empirical, "no closed form; sampled consecutive ratios",
                     ratio_trace(s, 16)};
}

HadamardVerdict is_hadamard(const OmegaSet& s) {
  if (!s.certified_infinite()) throw error("is_hadamard: set is not certified infinite");
  auto first = first_element(s);
  if (first && *first == 0) {
    return HadamardVerdict{HadamardVerdict::Result::No, std::nullopt, 0,
                           "first element is 0; a Hadamard sequence must be positive (tail-shift first)",
                           {}};
  }
  if (auto g = geometric_form(s)) {
    Int q = 1;
    for (unsigned i = 0; i < g->step; ++i) q *= g->base;
    return HadamardVerdict{HadamardVerdict::Result::Yes, Rat(q), 0,
                           "every consecutive ratio equals " + q.str(), ratio_trace(s, 8)};
  }
  if (auto c = factorial_subset_shift(s)) {
    // (k+1)! + c >= 2(k! + c) as soon as (k-1) * k! >= c.
    Int fact = 1;
    unsigned k = 1;
    while (Int(k - 1) * fact < *c) {
      ++k;
      fact *= k;
    }
    Int settled_value = fact + *c;
    std::size_t from = 0;
    for (const Int& v : s.enumerate(64)) {
      if (v >= settled_value) break;
      ++from;
    }
    return HadamardVerdict{HadamardVerdict::Result::Yes, Rat(2), from,
                           "consecutive elements at least double once (k-1)*k! >= c",
                           ratio_trace(s, 8)};
  }
  if (periodic_form(s)) {
    return HadamardVerdict{HadamardVerdict::Result::No, std::nullopt, 0,
                           "eventually periodic set has bounded gaps, so ratios tend to 1",
                           ratio_trace(s, 8)};
  }
  return HadamardVerdict{HadamardVerdict::Result::Empirical, std::nullopt, 0,
                         "no closed form; sampled consecutive ratios", ratio_trace(s, 16)};
}

std::pair<OmegaSet, OmegaSet> partition_even_odd_positions(const OmegaSet& s) {
  if (!s.certified_infinite())
    throw error("partition_even_odd_positions: set is not certified infinite");
  return {OmegaSet::strided(s, 0, 2), OmegaSet::strided(s, 1, 2)};
}

}  // namespace powerseq
