#include "powerseq/convergence.hpp"

#include <algorithm>

namespace powerseq {

namespace {

std::string exceptions_note(const DivisibilityProfile& p) {
  if (p.exceptions.empty()) return "";
  std::string s = "; sample exceptions:";
  for (const auto& e : p.exceptions) s += " " + e.str();
  return s;
}

ConvergenceVerdict converges(std::string cert) {
  ConvergenceVerdict v;
  v.status = ConvergenceVerdict::Status::ConvergesExact;
  v.certificate = std::move(cert);
  return v;
}

ConvergenceVerdict diverges(std::string cert, const Int& modulus, const DivisibilityProfile& p) {
  ConvergenceVerdict v;
  v.status = ConvergenceVerdict::Status::DivergesExact;
  v.certificate = std::move(cert);
  v.modulus = modulus;
  if (!p.exceptions.empty()) {
    v.witness_exponent = p.exceptions.front();
    v.witness_distance = Rat(1, modulus);
  }
  return v;
}

ConvergenceVerdict unknown(std::string cert) {
  ConvergenceVerdict v;
  v.status = ConvergenceVerdict::Status::Unknown;
  v.certificate = std::move(cert);
  return v;
}

}  // namespace

namespace {

// Window evidence when no closed form decides the divisibility profile.
ConvergenceVerdict empirical_scan(const CirclePoint& x, const OmegaSet& b,
                                  const std::string& why_undecided) {
  constexpr std::size_t kWindow = 48;
  std::vector<Int> elems;
  try {
    EnumBudget budget;
    budget.max_steps = 200'000;
    SetEnumerator en(b, budget);
    while (elems.size() < kWindow) {
      auto v = en.next();
      if (!v) break;
      elems.push_back(std::move(*v));
    }
  } catch (const resource_error&) {
  }
  if (elems.size() < 8) return unknown(why_undecided + "; too few elements reachable for a scan");

  ConvergenceVerdict v;
  const CirclePoint one;
  Rat tail_max(0);
  std::optional<Int> last_bad;
  std::size_t half = elems.size() / 2;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    Rat d = circle_dist(circle_pow(x, elems[i]), one);
    if (i >= half && d > tail_max) tail_max = d;
    if (d != 0) last_bad = elems[i];
  }
  std::string window = "window of " + std::to_string(elems.size()) + " elements";
  if (tail_max == 0) {
    v.status = ConvergenceVerdict::Status::EmpiricalConverges;
    v.certificate = why_undecided + "; " + window +
                    ": every element in the second half has x^n = 1 (evidence only)";
    v.witness_distance = tail_max;
    return v;
  }
  v.status = ConvergenceVerdict::Status::EmpiricalDiverges;
  v.certificate = why_undecided + "; " + window + ": tail distances stay as large as " +
                  rat_to_string(tail_max) + " (evidence only)";
  v.witness_exponent = last_bad;
  v.witness_distance = tail_max;
  return v;
}

}  // namespace

ConvergenceVerdict in_C_B(const CirclePoint& x, const OmegaSet& b) {
  if (b.certified_finite()) throw error("in_C_B: index set must be infinite");
  Int q = x.order();
  if (q == 1) return converges("x is the identity; x^n = 1 for every n");
  auto profile = divisibility_profile(b, q);
  switch (profile.count) {
    case DivisibilityProfile::Count::Finite:
      return converges("order " + q.str() + " divides every element of the index set from index " +
                       std::to_string(profile.exception_index_bound) + " on (" + profile.reason +
                       "), so x^n = 1 from there" + exceptions_note(profile));
    case DivisibilityProfile::Count::Infinite:
      return diverges("infinitely many n in the index set have " + q.str() +
                          " not dividing n (" + profile.reason + "); for each such n, d(x^n, 1) >= 1/" +
                          q.str() + exceptions_note(profile),
                      q, profile);
    case DivisibilityProfile::Count::Unknown:
      break;
  }
  return empirical_scan(x, b,
                        "divisibility of the index set by " + q.str() + " is not decided (" +
                            profile.reason + ")");
}

ConvergenceVerdict in_C_B_torus(const TorusPoint& x, const OmegaSet& b) {
  if (x.coords.empty()) return converges("empty coordinate list");
  std::string joint;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    auto v = in_C_B(x.coords[i], b);
    if (v.status == ConvergenceVerdict::Status::DivergesExact) {
      v.certificate = "coordinate " + std::to_string(i) + " diverges: " + v.certificate;
      return v;
    }
    if (v.status != ConvergenceVerdict::Status::ConvergesExact) {
      v.certificate = "coordinate " + std::to_string(i) + " undecided: " + v.certificate;
      return v;
    }
    if (i == 0) joint = v.certificate;
  }
  return converges("every coordinate converges (coordinate 0: " + joint + ")");
}

ConvergenceVerdict in_C_B_orth(const OrthElement& g, const OmegaSet& b) {
  if (!g.flip) return in_C_B(g.angle, b);
  if (b.certified_finite()) throw error("in_C_B_orth: index set must be infinite");
  auto profile = divisibility_profile(b, 2);
  switch (profile.count) {
    case DivisibilityProfile::Count::Finite:
      return converges(
          "reflection: even powers are the identity, and odd exponents stop at index " +
          std::to_string(profile.exception_index_bound) + " (" + profile.reason + ")" +
          exceptions_note(profile));
    case DivisibilityProfile::Count::Infinite:
      return diverges("reflection: g^n = g for each of the infinitely many odd n in the index set (" +
                          profile.reason + ")" + exceptions_note(profile),
                      2, profile);
    case DivisibilityProfile::Count::Unknown:
      break;
  }
  return unknown("parity of the index set is not decided: " + profile.reason);
}

ConvergenceVerdict in_D_F(const CirclePoint& x, const FilterSpec& f, std::uint64_t search_budget) {
  const Int q = x.order();
  switch (f.kind()) {
    case FilterKind::Principal: {
      auto v = in_C_B(x, f.principal_set());
      if (v.converges_exact()) {
        v.witness = f.principal_set();
        v.certificate += "; the generating set itself is the member";
      } else if (v.diverges_exact()) {
        v.certificate +=
            "; every member contains the generating set, and supersets only add exponents";
      }
      return v;
    }
    case FilterKind::BohrBasic: {
      auto v = in_C_B(x, f.bohr_set());
      if (v.converges_exact()) {
        v.witness = f.bohr_set();
        v.certificate += "; the basic neighborhood set is the member";
      } else if (v.diverges_exact()) {
        v.certificate += "; every member contains the basic neighborhood set";
      }
      return v;
    }
    case FilterKind::NiceF: {
      if (q == 1) {
        auto v = converges("x is the identity; any member works");
        v.witness = OmegaSet::factorial_shift(1);
        return v;
      }
      auto profile = divisibility_profile(OmegaSet::factorial_shift(1), q);
      auto v = diverges(
          "every member contains a tail of {k!+1 : k in D} for a density-1 D; k!+1 = 1 (mod " +
              q.str() + ") for k >= " + q.str() +
              ", so each member keeps infinitely many exponents with d(x^n, 1) >= 1/" + q.str(),
          q, profile);
      return v;
    }
    case FilterKind::BohrFamily: {
      OmegaSet multiples_of_order = OmegaSet::multiples(q);
      auto v = in_C_B(x, multiples_of_order);  // x^(jq) = 1 exactly
      v.witness = multiples_of_order;
      v.certificate =
          "x^n = 1 for every multiple of the order " + q.str() +
          "; that set is the basic neighborhood cut out by x itself at any tolerance below 1/" +
          q.str() + " (" + v.certificate + ")";
      return v;
    }
    case FilterKind::GeneratedBy: {
      const auto& gens = f.generators();
      if (gens.size() + 1 > search_budget) {
        return unknown("search budget smaller than the generator family");
      }
      for (const auto& g : gens) {
        auto v = in_C_B(x, g);
        if (v.converges_exact()) {
          v.witness = g;
          v.certificate += "; witnessed by a single generator";
          return v;
        }
      }
      OmegaSet inter = gens[0];
      for (std::size_t i = 1; i < gens.size(); ++i) inter = OmegaSet::set_intersection(inter, gens[i]);
      auto v = in_C_B(x, inter);
      if (v.converges_exact()) {
        v.witness = inter;
        v.certificate += "; witnessed by the intersection of all generators";
      } else if (v.diverges_exact()) {
        v.certificate +=
            "; every member contains the intersection of all generators, so no member works";
      }
      return v;
    }
  }
  throw error("in_D_F: unhandled filter kind");
}

Rat empirical_tail(const CirclePoint& x, const OmegaSet& b, std::size_t start_index,
                   std::size_t end_index, const std::atomic<bool>* cancel) {
  if (end_index <= start_index) throw error("empirical_tail: window is empty");
  SetEnumerator en(b, {});
  for (std::size_t i = 0; i < start_index; ++i) {
    if (!en.next()) throw error("empirical_tail: set exhausted before the window");
  }
  Rat worst(0);
  const CirclePoint one;
  for (std::size_t i = start_index; i < end_index; ++i) {
    if (cancel && i % 64 == 0 && cancel->load(std::memory_order_relaxed))
      throw error("empirical_tail: cancelled");
    auto n = en.next();
    if (!n) break;  // finite set: max over what exists
    Rat d = circle_dist(circle_pow(x, *n), one);
    if (d > worst) worst = d;
  }
  return worst;
}

HadamardCounterexampleReport hadamard_counterexample_check(const Int& q_max) {
  if (q_max < 2) throw error("hadamard_counterexample_check: q_max must be >= 2");
  HadamardCounterexampleReport rep;
  rep.q_max = q_max;
  OmegaSet even_positions = OmegaSet::strided(OmegaSet::powers(2), 0, 2);  // {2^(2k)}
  OmegaSet odd_positions = OmegaSet::strided(OmegaSet::powers(2), 1, 2);   // {2^(2k+1)}
  for (Int q = 1; q <= q_max; ++q) {
    ++rep.orders_checked;
    CirclePoint x = CirclePoint::from(1, q);
    auto along_c = in_C_B(x, even_positions);
    if (!along_c.converges_exact()) {
      if (!along_c.diverges_exact())
        rep.violations.push_back("order " + q.str() + ": verdict along C undecided");
      continue;
    }
    rep.convergent_orders.push_back(q);
    bool power_of_two = (q & (q - 1)) == 0;
    if (!power_of_two)
      rep.violations.push_back("order " + q.str() + " converges along C but is not a power of two");
    auto along_b = in_C_B(x, odd_positions);
    if (!along_b.converges_exact())
      rep.violations.push_back("order " + q.str() + " converges along C but not along B");
  }
  rep.pass = rep.violations.empty();
  return rep;
}

}  // namespace powerseq
