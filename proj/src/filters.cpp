#include "powerseq/filters.hpp"

#include <algorithm>
#include <map>

namespace powerseq {

namespace {

const Int kBohrPeriodCap = 1'000'000;
const Int kDensityHorizon = 1'000'000;
constexpr std::size_t kBoundedPrefix = 48;

}  // namespace

// --- FilterSpec ----------------------------------------------------------------

FilterSpec FilterSpec::principal(const OmegaSet& b) {
  if (!b.certified_infinite()) throw error("principal: base set must be certified infinite");
  FilterSpec f;
  f.kind_ = FilterKind::Principal;
  f.principal_ = b;
  return f;
}

FilterSpec FilterSpec::nice_f() {
  FilterSpec f;
  f.kind_ = FilterKind::NiceF;
  return f;
}

FilterSpec FilterSpec::generated_by(std::vector<OmegaSet> generators, int fip_depth) {
  if (generators.empty()) throw error("generated_by: needs at least one generator");
  auto fip = check_fip(generators, fip_depth);
  if (!fip.holds) {
    std::string which;
    for (auto i : fip.violating_subset) which += (which.empty() ? "" : ",") + std::to_string(i);
    throw error("generated_by: finite-intersection property fails for generators {" + which + "}");
  }
  FilterSpec f;
  f.kind_ = FilterKind::GeneratedBy;
  f.generators_ = std::move(generators);
  return f;
}

FilterSpec FilterSpec::bohr_basic(std::vector<CirclePoint> points, const Rat& eps) {
  FilterSpec f;
  f.kind_ = FilterKind::BohrBasic;
  f.bohr_set_ = bohr_basic_set(points, eps);  // validates eps and the period cap
  f.points_ = std::move(points);
  f.eps_ = eps;
  return f;
}

FilterSpec FilterSpec::bohr_family() {
  FilterSpec f;
  f.kind_ = FilterKind::BohrFamily;
  return f;
}

FilterSpec FilterSpec::tilde(bool enabled) const {
  FilterSpec f = *this;
  f.tilde_ = enabled;
  return f;
}

const OmegaSet& FilterSpec::principal_set() const {
  if (kind_ != FilterKind::Principal || !principal_) throw error("principal_set: wrong filter kind");
  return *principal_;
}
const std::vector<OmegaSet>& FilterSpec::generators() const {
  if (kind_ != FilterKind::GeneratedBy) throw error("generators: wrong filter kind");
  return generators_;
}
const std::vector<CirclePoint>& FilterSpec::bohr_points() const {
  if (kind_ != FilterKind::BohrBasic) throw error("bohr_points: wrong filter kind");
  return points_;
}
const Rat& FilterSpec::bohr_eps() const {
  if (kind_ != FilterKind::BohrBasic) throw error("bohr_eps: wrong filter kind");
  return eps_;
}
const OmegaSet& FilterSpec::bohr_set() const {
  if (kind_ != FilterKind::BohrBasic || !bohr_set_) throw error("bohr_set: wrong filter kind");
  return *bohr_set_;
}

// --- basic Bohr neighborhoods -----------------------------------------------------

OmegaSet bohr_basic_set(const std::vector<CirclePoint>& points, const Rat& eps) {
  if (eps <= 0) throw error("bohr_basic_set: eps must be positive");
  Int period = 1;
  for (const auto& p : points) {
    period = lcm_int(period, p.order());
    if (period > kBohrPeriodCap) throw error("bohr_basic_set: lcm of point orders exceeds cap");
  }
  std::vector<Int> good;
  for (Int r = 0; r < period; ++r) {
    bool ok = true;
    for (const auto& p : points) {
      if (circle_dist(circle_pow(p, r), CirclePoint()) >= eps) {
        ok = false;
        break;
      }
    }
    if (ok) good.push_back(r);
  }
  // r = 0 always qualifies, so the set contains all multiples of the period.
  return OmegaSet::residues(period, std::move(good));
}

// --- containment engine ------------------------------------------------------------

namespace {

ContainmentResult yes(std::string reason, bool modulo_finite = false) {
  return ContainmentResult{ContainmentResult::Verdict::Yes, modulo_finite, std::move(reason),
                           std::nullopt, std::nullopt};
}
ContainmentResult no(std::string reason, std::optional<Int> cx = std::nullopt) {
  return ContainmentResult{ContainmentResult::Verdict::No, false, std::move(reason), std::move(cx),
                           std::nullopt};
}
ContainmentResult unknown(std::string reason, std::optional<std::size_t> prefix = std::nullopt) {
  return ContainmentResult{ContainmentResult::Verdict::Unknown, false, std::move(reason),
                           std::nullopt, prefix};
}

bool is_yes(const ContainmentResult& r) { return r.verdict == ContainmentResult::Verdict::Yes; }
bool is_no(const ContainmentResult& r) { return r.verdict == ContainmentResult::Verdict::No; }

}  // namespace

ContainmentResult set_contained_in(const OmegaSet& sub, const OmegaSet& sup, bool up_to_finite) {
  // 1. identical descriptors
  if (sub.structurally_equal(sup)) return yes("identical descriptors");

  // 1b. finite sub: decide by full enumeration
  if (sub.certified_finite()) {
    if (up_to_finite) return yes("finite set; containment up to finite modification is vacuous", true);
    try {
      SetEnumerator en(sub, {});
      while (auto v = en.next()) {
        if (!sup.contains(*v)) return no("element of the finite set is missing", *v);
      }
      return yes("all elements of the finite set are present");
    } catch (const resource_error&) {
      return unknown("budget exhausted while checking a finite set");
    }
  }

  // 2. structural superset rules
  if (sup.kind() == SetKind::Union) {
    auto l = set_contained_in(sub, sup.left(), up_to_finite);
    if (is_yes(l)) return yes("contained in the left side of the union: " + l.reason, l.modulo_finite);
    auto r = set_contained_in(sub, sup.right(), up_to_finite);
    if (is_yes(r)) return yes("contained in the right side of the union: " + r.reason, r.modulo_finite);
  }
  if (sup.kind() == SetKind::Intersection) {
    auto l = set_contained_in(sub, sup.left(), up_to_finite);
    auto r = set_contained_in(sub, sup.right(), up_to_finite);
    if (is_yes(l) && is_yes(r))
      return yes("contained in both sides of the intersection", l.modulo_finite || r.modulo_finite);
    if (is_no(l)) return no("not contained in the left side of the intersection", l.counterexample);
    if (is_no(r)) return no("not contained in the right side of the intersection", r.counterexample);
  }
  if (sup.kind() == SetKind::Tail) {
    auto inner = set_contained_in(sub, sup.left(), up_to_finite);
    if (is_yes(inner)) {
      if (up_to_finite)
        return yes("contained in the base set; the tail drops only finitely many elements", true);
      if (sub.structurally_equal(sup.left()) && sup.drop_count() > 0) {
        auto first = sub.enumerate(1);
        if (!first.empty()) return no("the tail drops leading elements of the set", first[0]);
      }
    }
  }

  // 3. structural subset rules
  if (sub.kind() == SetKind::Intersection) {
    auto l = set_contained_in(sub.left(), sup, up_to_finite);
    if (is_yes(l)) return yes("intersection is inside its left factor: " + l.reason, l.modulo_finite);
    auto r = set_contained_in(sub.right(), sup, up_to_finite);
    if (is_yes(r)) return yes("intersection is inside its right factor: " + r.reason, r.modulo_finite);
  }
  if (sub.kind() == SetKind::Tail || sub.kind() == SetKind::Strided) {
    auto base = set_contained_in(sub.left(), sup, up_to_finite);
    if (is_yes(base)) return yes("selection from a contained base set: " + base.reason, base.modulo_finite);
  }
  if (sub.kind() == SetKind::Difference) {
    auto base = set_contained_in(sub.left(), sup, up_to_finite);
    if (is_yes(base)) return yes("difference is inside its left side: " + base.reason, base.modulo_finite);
  }
  if (sub.kind() == SetKind::Union) {
    auto l = set_contained_in(sub.left(), sup, up_to_finite);
    auto r = set_contained_in(sub.right(), sup, up_to_finite);
    if (is_yes(l) && is_yes(r))
      return yes("both union sides contained", l.modulo_finite || r.modulo_finite);
    if (is_no(l)) return no("left union side not contained", l.counterexample);
    if (is_no(r)) return no("right union side not contained", r.counterexample);
  }

  // 4. periodic vs periodic: exact residue decision
  auto pf_sub = periodic_form(sub);
  auto pf_sup = periodic_form(sup);
  if (pf_sub && pf_sup) {
    Int l = lcm_int(pf_sub->modulus, pf_sup->modulus);
    if (l <= kBohrPeriodCap) {
      Int start = std::max(pf_sub->threshold, pf_sup->threshold);
      for (Int r = 0; r < l; ++r) {
        bool in_sub = std::binary_search(pf_sub->residues.begin(), pf_sub->residues.end(),
                                         mod_floor(r, pf_sub->modulus));
        if (!in_sub) continue;
        bool in_sup = std::binary_search(pf_sup->residues.begin(), pf_sup->residues.end(),
                                         mod_floor(r, pf_sup->modulus));
        if (!in_sup) {
          Int witness = start + mod_floor(r - start, l);
          return no("recurring residue class " + r.str() + " (mod " + l.str() +
                        ") lies outside the superset",
                    witness);
        }
      }
      if (up_to_finite) return yes("all recurring residue classes are contained", true);
      // exact: also check the finite prefix region
      if (start > 0) {
        EnumBudget budget;
        budget.value_cap = start;  // the cap is a sentinel at 0, so cap at start and stop early
        try {
          SetEnumerator en(sub, budget);
          while (auto v = en.next()) {
            if (*v >= start) break;
            if (!sup.contains(*v)) return no("prefix element missing from the superset", *v);
          }
        } catch (const resource_error&) {
          return unknown("budget exhausted while checking the prefix region");
        }
      }
      return yes("all residue classes and all prefix elements are contained");
    }
  }

  // 5. factorial/geometric tails against a periodic superset
  if (pf_sup) {
    std::optional<Int> tail_threshold;
    std::vector<Int> tail_residues;
    bool recurs = false;
    std::string how;
    if (auto c = factorial_subset_shift(sub)) {
      // Elements are k!+c; beyond k!* with P | k!* they are all = c (mod P).
      Int p = pf_sup->modulus;
      Int f = 1, k = 1;
      while (mod_floor(f, p) != 0 && k < 2'000'000) {
        ++k;
        f *= k;
      }
      if (mod_floor(f, p) == 0) {
        tail_threshold = f + *c;
        tail_residues = {mod_floor(*c, p)};
        recurs = sub.certified_infinite();
        how = "factorial tail is constant mod " + p.str();
      }
    } else if (auto g = geometric_form(sub)) {
      // Orbit of base^(lead + j*step) mod P enters a cycle within P steps.
      Int p = pf_sup->modulus;
      Int mul = 1;
      for (unsigned i = 0; i < g->step; ++i) mul = mod_floor(mul * g->base, p);
      Int x = 1;
      for (unsigned i = 0; i < g->lead; ++i) x = mod_floor(x * g->base, p);
      std::map<Int, std::size_t> seen;
      std::vector<Int> orbit;
      while (!seen.count(x)) {
        seen[x] = orbit.size();
        orbit.push_back(x);
        x = mod_floor(x * mul, p);
      }
      std::size_t entry = seen[x];
      tail_residues.assign(orbit.begin() + entry, orbit.end());
      std::sort(tail_residues.begin(), tail_residues.end());
      tail_residues.erase(std::unique(tail_residues.begin(), tail_residues.end()),
                          tail_residues.end());
      Int thr = 1;
      for (unsigned i = 0; i < g->lead; ++i) thr *= g->base;
      for (std::size_t i = 0; i < entry; ++i)
        for (unsigned j = 0; j < g->step; ++j) thr *= g->base;
      tail_threshold = thr;
      recurs = true;  // each cycle residue occurs for infinitely many exponents
      how = "power residues mod " + p.str() + " cycle";
    }

    if (tail_threshold) {
      std::optional<Int> bad;
      for (const Int& r : tail_residues) {
        if (!std::binary_search(pf_sup->residues.begin(), pf_sup->residues.end(), r)) {
          bad = r;
          break;
        }
      }
      if (bad && recurs) {
        // find a concrete tail witness in that class
        std::optional<Int> witness;
        try {
          EnumBudget b;
          b.max_steps = 100'000;
          SetEnumerator en(sub, b);
          while (auto v = en.next()) {
            if (*v >= std::max(*tail_threshold, pf_sup->threshold) &&
                mod_floor(*v, pf_sup->modulus) == *bad) {
              witness = *v;
              break;
            }
          }
        } catch (const resource_error&) {
        }
        return no(how + "; recurring residue " + bad->str() + " escapes the superset", witness);
      }
      if (!bad) {
        // tail contained; inspect the finitely many early elements
        Int start = std::max(*tail_threshold, pf_sup->threshold);
        std::vector<Int> missing;
        try {
          EnumBudget budget;
          budget.value_cap = std::max(start, Int(1));
          SetEnumerator en(sub, budget);
          while (auto v = en.next()) {
            if (*v >= start) break;
            if (!sup.contains(*v)) missing.push_back(*v);
          }
        } catch (const resource_error&) {
          return unknown("budget exhausted while checking early elements");
        }
        if (missing.empty()) return yes(how + "; tail residues and early elements all contained");
        if (up_to_finite)
          return yes(how + "; tail contained, " + std::to_string(missing.size()) +
                         " early exceptions",
                     true);
        return no(how + "; early element missing", missing.front());
      }
    }
  }

  // 6. exact density comparison
  auto d_sub = exact_density(sub);
  auto d_sup = exact_density(sup);
  if (d_sub && d_sup && d_sub->value > d_sup->value) {
    return no("density " + rat_to_string(d_sub->value) + " cannot embed into density " +
              rat_to_string(d_sup->value));
  }

  // 7. bounded evidence
  std::size_t checked = 0;
  try {
    EnumBudget b;
    b.max_steps = 200'000;
    SetEnumerator en(sub, b);
    while (checked < kBoundedPrefix) {
      auto v = en.next();
      if (!v) break;
      if (!sup.contains(*v)) {
        if (!up_to_finite) return no("bounded check found a missing element", *v);
        return unknown("found exceptions in a bounded check; cannot certify they are finite");
      }
      ++checked;
    }
  } catch (const resource_error&) {
    return unknown("enumeration budget exhausted during the bounded check");
  }
  return unknown("no closed-form rule; first " + std::to_string(checked) + " elements are contained",
                 checked);
}

// --- the nice filter: pullback along k -> k!+1 --------------------------------------

namespace {

enum class PullbackKind { Set, Cofinite, FiniteOnly, Unknown };

struct Pullback {
  PullbackKind kind;
  std::optional<OmegaSet> set;  // for Set
  std::string note;
};

Pullback pb_set(OmegaSet s, std::string note) {
  return Pullback{PullbackKind::Set, std::move(s), std::move(note)};
}
Pullback pb(PullbackKind k, std::string note) { return Pullback{k, std::nullopt, std::move(note)}; }

// The set {k : k!+1 is an element of w}, up to finite error.
Pullback nice_pullback(const OmegaSet& w) {
  switch (w.kind()) {
    case SetKind::FactorialShift: {
      if (w.shift() == 1) {
        if (!w.has_domain()) return pb(PullbackKind::Cofinite, "the full generator k!+1 over omega");
        return pb_set(w.domain(), "shift-1 family pulls back to its domain");
      }
      // k!+1 = k'!+c has no solutions once factorial gaps exceed |1-c|.
      Int diff = abs(w.shift() - 1);
      Int k = 2, fact = 2;  // 2!
      while (fact - 1 <= diff || Int(k) * fact <= diff) {
        ++k;
        fact *= k;
      }
      return pb(PullbackKind::FiniteOnly, "factorial gaps exceed the shift difference beyond k=" + k.str());
    }
    case SetKind::Factorial:
      return pb(PullbackKind::FiniteOnly, "k!+1 is a factorial only for k <= 1");
    case SetKind::Powers: {
      // For k >= b, k!+1 = 1 (mod b) while b^j = 0 (mod b) for j >= 1.
      return pb(PullbackKind::FiniteOnly, "k!+1 is never a high power of the base");
    }
    case SetKind::Multiples: {
      if (w.modulus() == 1) return pb(PullbackKind::Cofinite, "every k qualifies");
      return pb(PullbackKind::FiniteOnly,
                "k!+1 = 1 (mod " + w.modulus().str() + ") for all large k");
    }
    case SetKind::Arithmetic: {
      const Int& d = w.step();
      if (mod_floor(Int(1) - w.first_term(), d) == 0)
        return pb(PullbackKind::Cofinite, "k!+1 falls in the progression for all large k");
      return pb(PullbackKind::FiniteOnly, "k!+1 leaves the progression for all large k");
    }
    case SetKind::Residues: {
      if (std::binary_search(w.values().begin(), w.values().end(), mod_floor(Int(1), w.modulus())))
        return pb(PullbackKind::Cofinite, "residue 1 is accepted, so all large k qualify");
      return pb(PullbackKind::FiniteOnly, "residue 1 is rejected, so only small k qualify");
    }
    case SetKind::Explicit:
      return pb(PullbackKind::FiniteOnly, "finite set");
    case SetKind::Union: {
      auto a = nice_pullback(w.left());
      auto b = nice_pullback(w.right());
      if (a.kind == PullbackKind::Cofinite || b.kind == PullbackKind::Cofinite)
        return pb(PullbackKind::Cofinite, "one union side is cofinal");
      if (a.kind == PullbackKind::Set && b.kind == PullbackKind::Set)
        return pb_set(OmegaSet::set_union(*a.set, *b.set), "union of the side pullbacks");
      if (a.kind == PullbackKind::Set && b.kind == PullbackKind::FiniteOnly)
        return pb_set(*a.set, a.note + "; other side contributes finitely");
      if (b.kind == PullbackKind::Set && a.kind == PullbackKind::FiniteOnly)
        return pb_set(*b.set, b.note + "; other side contributes finitely");
      if (a.kind == PullbackKind::FiniteOnly && b.kind == PullbackKind::FiniteOnly)
        return pb(PullbackKind::FiniteOnly, "both sides contribute finitely");
      return pb(PullbackKind::Unknown, "union sides not reducible");
    }
    case SetKind::Intersection: {
      auto a = nice_pullback(w.left());
      auto b = nice_pullback(w.right());
      if (a.kind == PullbackKind::FiniteOnly || b.kind == PullbackKind::FiniteOnly)
        return pb(PullbackKind::FiniteOnly, "one intersection side contributes finitely");
      if (a.kind == PullbackKind::Cofinite && b.kind == PullbackKind::Cofinite)
        return pb(PullbackKind::Cofinite, "both sides cofinal");
      if (a.kind == PullbackKind::Cofinite && b.kind == PullbackKind::Set)
        return pb_set(*b.set, b.note + "; other side cofinal");
      if (b.kind == PullbackKind::Cofinite && a.kind == PullbackKind::Set)
        return pb_set(*a.set, a.note + "; other side cofinal");
      if (a.kind == PullbackKind::Set && b.kind == PullbackKind::Set)
        return pb_set(OmegaSet::set_intersection(*a.set, *b.set), "intersection of the side pullbacks");
      return pb(PullbackKind::Unknown, "intersection sides not reducible");
    }
    case SetKind::Difference: {
      auto a = nice_pullback(w.left());
      auto b = nice_pullback(w.right());
      if (a.kind == PullbackKind::FiniteOnly)
        return pb(PullbackKind::FiniteOnly, "left side contributes finitely");
      if (b.kind == PullbackKind::Cofinite)
        return pb(PullbackKind::FiniteOnly, "removed set is cofinal");
      if (b.kind == PullbackKind::FiniteOnly && a.kind == PullbackKind::Cofinite)
        return pb(PullbackKind::Cofinite, "removing a finite pullback keeps the set cofinal");
      if (b.kind == PullbackKind::FiniteOnly && a.kind == PullbackKind::Set)
        return pb_set(*a.set, a.note + "; removed set contributes finitely");
      if (a.kind == PullbackKind::Set && b.kind == PullbackKind::Set)
        return pb_set(OmegaSet::set_difference(*a.set, *b.set), "difference of the side pullbacks");
      return pb(PullbackKind::Unknown, "difference sides not reducible");
    }
    case SetKind::Tail: {
      auto a = nice_pullback(w.left());
      a.note += " (finite modification by the tail)";
      if (a.kind == PullbackKind::Set) return a;  // density is insensitive to the dropped prefix
      return a;
    }
    case SetKind::Strided:
      return pb(PullbackKind::Unknown, "stride selection not reducible");
  }
  return pb(PullbackKind::Unknown, "unhandled descriptor");
}

MembershipVerdict from_containment(const ContainmentResult& r, const OmegaSet& witness,
                                   std::string context) {
  switch (r.verdict) {
    case ContainmentResult::Verdict::Yes:
      return MembershipVerdict{MembershipVerdict::Kind::Member, context + ": " + r.reason, witness,
                               std::nullopt, std::nullopt};
    case ContainmentResult::Verdict::No:
      return MembershipVerdict{MembershipVerdict::Kind::NonMember, context + ": " + r.reason,
                               std::nullopt, r.counterexample, std::nullopt};
    case ContainmentResult::Verdict::Unknown:
      break;
  }
  auto kind = r.checked_prefix ? MembershipVerdict::Kind::Empirical : MembershipVerdict::Kind::Unknown;
  return MembershipVerdict{kind, context + ": " + r.reason, std::nullopt, std::nullopt, std::nullopt};
}

}  // namespace

MembershipVerdict filter_member(const FilterSpec& f, const OmegaSet& w) {
  switch (f.kind()) {
    case FilterKind::Principal: {
      auto r = set_contained_in(f.principal_set(), w, f.is_tilde());
      return from_containment(r, f.principal_set(), "principal filter containment");
    }
    case FilterKind::BohrBasic: {
      auto r = set_contained_in(f.bohr_set(), w, f.is_tilde());
      return from_containment(r, f.bohr_set(), "basic neighborhood containment");
    }
    case FilterKind::GeneratedBy: {
      const auto& gens = f.generators();
      for (std::size_t i = 0; i < gens.size(); ++i) {
        auto r = set_contained_in(gens[i], w, f.is_tilde());
        if (r.verdict == ContainmentResult::Verdict::Yes)
          return from_containment(r, gens[i], "generator " + std::to_string(i) + " contained");
      }
      OmegaSet inter = gens[0];
      for (std::size_t i = 1; i < gens.size(); ++i) inter = OmegaSet::set_intersection(inter, gens[i]);
      auto r = set_contained_in(inter, w, f.is_tilde());
      return from_containment(r, inter, "intersection of all generators");
    }
    case FilterKind::NiceF: {
      // Membership reduces to: the set {k : k!+1 in W} has density 1.
      auto p = nice_pullback(w);
      const std::string reduction =
          "membership holds iff {k : k!+1 in the set} has density 1";
      switch (p.kind) {
        case PullbackKind::Cofinite: {
          auto dv = DensityVerdict::one(p.note);
          return MembershipVerdict{MembershipVerdict::Kind::Member,
                                   reduction + "; pullback is cofinite (" + p.note + ")",
                                   OmegaSet::factorial_shift(1), std::nullopt, dv};
        }
        case PullbackKind::FiniteOnly: {
          auto dv = DensityVerdict::zero(p.note);
          return MembershipVerdict{MembershipVerdict::Kind::NonMember,
                                   reduction + "; pullback is finite (" + p.note + ")",
                                   std::nullopt, std::nullopt, dv};
        }
        case PullbackKind::Set: {
          auto dv = density(*p.set, kDensityHorizon);
          if (dv.kind == DensityVerdict::Kind::One) {
            return MembershipVerdict{MembershipVerdict::Kind::Member,
                                     reduction + "; pullback density 1 (" + dv.proof + ")",
                                     OmegaSet::factorial_shift(1, *p.set), std::nullopt, dv};
          }
          if (dv.exact()) {
            return MembershipVerdict{
                MembershipVerdict::Kind::NonMember,
                reduction + "; pullback density " + rat_to_string(dv.value) + " (" + dv.proof + ")",
                std::nullopt, std::nullopt, dv};
          }
          return MembershipVerdict{MembershipVerdict::Kind::Empirical,
                                   reduction + "; pullback density only estimated", std::nullopt,
                                   std::nullopt, dv};
        }
        case PullbackKind::Unknown:
          break;
      }
      // last resort: sample the pullback directly
      std::size_t hits = 0;
      constexpr unsigned kProbe = 48;
      Int fact = 1;
      for (unsigned k = 1; k <= kProbe; ++k) {
        fact *= k;
        try {
          if (w.contains(fact + 1)) ++hits;
        } catch (const resource_error&) {
          break;
        }
      }
      return MembershipVerdict{MembershipVerdict::Kind::Empirical,
                               "pullback not reducible (" + p.note + "); sampled " +
                                   std::to_string(hits) + "/" + std::to_string(kProbe) +
                                   " values k!+1 inside the set",
                               std::nullopt, std::nullopt, std::nullopt};
    }
    case FilterKind::BohrFamily: {
      if (auto d = exact_density(w)) {
        if (d->value == 0) {
          return MembershipVerdict{
              MembershipVerdict::Kind::NonMember,
              "members of the neighborhood family contain a periodic basic set of positive "
              "density; this set has exact density 0 (" +
                  d->proof + ")",
              std::nullopt, std::nullopt, std::nullopt};
        }
      }
      if (auto pf = periodic_form(w)) {
        for (int t = 1; t <= 4; ++t) {
          Int l = pf->modulus * t;
          auto basic = OmegaSet::multiples(l);
          auto r = set_contained_in(basic, w, f.is_tilde());
          if (r.verdict == ContainmentResult::Verdict::Yes) {
            return MembershipVerdict{MembershipVerdict::Kind::Member,
                                     "contains the basic neighborhood of the order-" + l.str() +
                                         " point (all multiples of " + l.str() + "): " + r.reason,
                                     basic, std::nullopt, std::nullopt};
          }
        }
      }
      return MembershipVerdict{MembershipVerdict::Kind::Unknown,
                               "membership in the full neighborhood family is decided only for "
                               "density-0 sets and periodic descriptors",
                               std::nullopt, std::nullopt, std::nullopt};
    }
  }
  throw error("filter_member: unhandled filter kind");
}

// --- finite-intersection property ---------------------------------------------------

FipReport check_fip(const std::vector<OmegaSet>& generators, int depth) {
  if (depth < 1) throw error("check_fip: depth must be >= 1");
  if (generators.empty()) throw error("check_fip: no generators");
  const std::size_t n = generators.size();
  const std::size_t want = static_cast<std::size_t>(depth);

  // Horizon: far enough that each generator alone shows 8*depth elements.
  Int horizon = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Int> elems;
    try {
      elems = generators[i].enumerate(8 * want);
    } catch (const resource_error&) {
    }
    if (elems.size() < want) {
      return FipReport{false, "generator " + std::to_string(i) + " has fewer than " +
                                  std::to_string(want) + " reachable elements",
                       {i}, elems, horizon};
    }
    horizon = std::max(horizon, elems.back());
  }

  // All nonempty subsets of size <= depth.
  std::vector<std::size_t> subset;
  std::vector<std::vector<std::size_t>> subsets;
  auto expand = [&](auto&& self, std::size_t from) -> void {
    if (!subset.empty()) subsets.push_back(subset);
    if (subset.size() == want) return;
    for (std::size_t i = from; i < n; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  expand(expand, 0);
  if (subsets.size() > 8192) throw error("check_fip: too many generator subsets at this depth");

  for (const auto& s : subsets) {
    OmegaSet inter = generators[s[0]];
    for (std::size_t i = 1; i < s.size(); ++i)
      inter = OmegaSet::set_intersection(inter, generators[s[i]]);
    std::vector<Int> found;
    EnumBudget budget;
    budget.value_cap = horizon;
    budget.max_steps = 2'000'000;
    try {
      SetEnumerator en(inter, budget);
      while (found.size() < want) {
        auto v = en.next();
        if (!v) break;
        found.push_back(*v);
      }
    } catch (const resource_error&) {
    }
    if (found.size() < want) {
      return FipReport{false,
                       "intersection produced only " + std::to_string(found.size()) +
                           " elements below the horizon",
                       s, found, horizon};
    }
  }
  return FipReport{true,
                   "every intersection of at most " + std::to_string(depth) +
                       " generators shows at least " + std::to_string(depth) +
                       " elements below the horizon " + horizon.str(),
                   {}, {}, horizon};
}

FipReport check_fip(const FilterSpec& f, int depth) {
  switch (f.kind()) {
    case FilterKind::NiceF:
      return FipReport{true,
                       "generators are indexed by density-1 domains; finite intersections of "
                       "density-1 sets have density 1 and are infinite",
                       {}, {}, Int(0)};
    case FilterKind::BohrFamily:
      return FipReport{true,
                       "basic neighborhoods are periodic sets containing all multiples of their "
                       "period; finite intersections are again basic",
                       {}, {}, Int(0)};
    case FilterKind::Principal:
      return check_fip(std::vector<OmegaSet>{f.principal_set()}, depth);
    case FilterKind::BohrBasic:
      return check_fip(std::vector<OmegaSet>{f.bohr_set()}, depth);
    case FilterKind::GeneratedBy:
      return check_fip(f.generators(), depth);
  }
  throw error("check_fip: unhandled filter kind");
}

}  // namespace powerseq
