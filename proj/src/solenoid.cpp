#include "powerseq/solenoid.hpp"

#include <algorithm>

namespace powerseq {

SolenoidElement SolenoidElement::identity(std::size_t depth) {
  return SolenoidElement{std::vector<CirclePoint>(depth + 1)};
}

bool SolenoidElement::coherent() const {
  for (std::size_t l = 1; l < levels.size(); ++l) {
    if (circle_pow(levels[l], Int(l)) != levels[l - 1]) return false;
  }
  return true;
}

SolenoidElement embed_rational(const Rat& t, std::size_t depth) {
  SolenoidElement z;
  z.levels.reserve(depth + 1);
  Int fact = 1;
  for (std::size_t l = 0; l <= depth; ++l) {
    if (l > 0) fact *= Int(l);
    z.levels.emplace_back(t / Rat(fact));
  }
  if (!z.coherent()) throw error("embed_rational: coherence violated");  // unreachable
  return z;
}

namespace {

// (a_j/a_k) * gamma_k! <= sqrt(prod of eps_j..eps_(k-1)): exact by squaring.
bool star_holds(const ThinSchedule& s, std::size_t j, std::size_t k) {
  Int lhs = s.a[j] * factorial(s.gamma[k]);
  Int num = 1, den = 1;
  for (std::size_t i = j; i < k; ++i) {
    num *= rat_num(s.eps[i]);
    den *= rat_den(s.eps[i]);
  }
  return lhs * lhs * den <= s.a[k] * s.a[k] * num;
}

}  // namespace

ThinSchedule make_schedule(const OmegaSet& a_spec, std::size_t stages) {
  auto thin = is_thin(a_spec);
  if (thin.result == ThinVerdict::Result::No)
    throw not_thin_error("make_schedule: set is not thin (" + thin.reason + ")");
  if (thin.result == ThinVerdict::Result::Empirical)
    throw sup_not_computable_error(
        "make_schedule: thinness is only empirical, so the tail sup has no certificate");

  auto form = factorial_family_form(a_spec);
  if (!form)
    throw sup_not_computable_error(
        "make_schedule: tail-sup ratios need the consecutive factorial form k!+c");

  ThinSchedule s;
  // Consecutive ratios (k!+c)/((k+1)!+c) are strictly decreasing in k, so
  // the sup over the tail is the current ratio. An enumeration shift is
  // applied if the leading ratio were degenerate (>= 1); for this family
  // it never is, but the contract keeps the check.
  unsigned k0 = form->k_start;
  auto ratio_at = [&](unsigned k) {
    Int fk = factorial(k);
    return Rat(fk + form->shift, fk * Int(k + 1) + form->shift);
  };
  while (ratio_at(k0 + static_cast<unsigned>(s.start_offset)) >= 1) {
    ++s.start_offset;
    if (s.start_offset > 64)
      throw degenerate_epsilon_error("make_schedule: leading ratio stays >= 1 after shifting");
  }
  k0 += static_cast<unsigned>(s.start_offset);

  Int fact = factorial(k0);
  for (std::size_t j = 0; j <= stages; ++j) {
    unsigned k = k0 + static_cast<unsigned>(j);
    s.a.push_back(fact + form->shift);
    s.eps.push_back(ratio_at(k));
    fact *= Int(k + 1);
  }
  if (s.eps[0] >= 1) throw degenerate_epsilon_error("make_schedule: eps_0 >= 1");

  s.gamma.push_back(0);
  for (std::size_t j = 0; j + 1 <= stages; ++j) {
    // largest g with (g!)^2 * num(eps_j) <= den(eps_j)
    unsigned g = 0;
    Int gfact = 1;
    for (;;) {
      Int nfact = gfact * Int(g + 1);
      if (nfact * nfact * rat_num(s.eps[j]) > rat_den(s.eps[j])) break;
      ++g;
      gfact = nfact;
    }
    s.gamma.push_back(g);
  }

  // Schedule invariants, verified exactly.
  for (std::size_t j = 0; j + 1 <= stages; ++j) {
    if (s.eps[j + 1] > s.eps[j]) throw error("make_schedule: eps not non-increasing");
    if (Rat(s.a[j], s.a[j + 1]) > s.eps[j]) throw error("make_schedule: ratio exceeds eps");
    if (s.gamma[j + 1] < s.gamma[j]) throw error("make_schedule: gamma not non-decreasing");
  }
  for (std::size_t j = 0; j <= stages; ++j) {
    if (s.eps[j] > 1) throw error("make_schedule: eps above 1");
  }
  for (std::size_t j = 0; j < stages; ++j) {
    for (std::size_t k = j + 1; k <= stages; ++k) {
      if (!star_holds(s, j, k)) throw error("make_schedule: star inequality failed");
    }
  }
  return s;
}

std::pair<SolenoidElement, BuildCertificate> build(const ThinSchedule& schedule,
                                                   const std::vector<bool>& b_mask,
                                                   const SolenoidElement& v,
                                                   const SolenoidElement& w) {
  const std::size_t stages = schedule.stages();
  if (schedule.a.empty()) throw error("build: empty schedule");
  if (b_mask.size() < stages + 1) throw error("build: mask shorter than the schedule");
  const unsigned top = *std::max_element(schedule.gamma.begin(), schedule.gamma.end());
  if (v.depth() < top || w.depth() < top)
    throw target_depth_error("build: targets shallower than the deepest certified level");
  if (!v.coherent() || !w.coherent()) throw error("build: target elements are not coherent");

  BuildCertificate cert;
  cert.schedule = schedule;
  cert.b_mask = std::vector<bool>(b_mask.begin(), b_mask.begin() + stages + 1);
  cert.coherent_all_stages = true;
  bool all_ok = true;

  // Rational upper bounds on sqrt(eps_j); the limit bound is monotone in
  // the bound on the root, so rounding up is safe.
  const Rat slack(1, 10'000'000);
  for (std::size_t j = 0; j <= stages; ++j) {
    Rat ub = sqrt_upper(schedule.eps[j], slack);
    if (ub >= 1)
      throw degenerate_epsilon_error("build: sqrt(eps) upper bound reaches 1 at stage " +
                                     std::to_string(j));
    cert.sqrt_eps_upper.push_back(ub);
    cert.limit_bounds.push_back(ub / (1 - ub));
  }

  std::vector<SolenoidElement> snaps;
  snaps.reserve(stages + 1);
  SolenoidElement prev = SolenoidElement::identity(top);

  for (std::size_t k = 0; k <= stages; ++k) {
    const unsigned g = schedule.gamma[k];
    const Int& ak = schedule.a[k];
    const SolenoidElement& target = cert.b_mask[k] ? v : w;

    SolenoidElement z = SolenoidElement::identity(top);
    z.levels[g] = nearest_root(target.levels[g], ak, prev.levels[g]);
    for (unsigned l = g; l >= 1; --l) z.levels[l - 1] = circle_pow(z.levels[l], Int(l));
    for (unsigned l = g + 1; l <= top; ++l)
      z.levels[l] = CirclePoint(z.levels[l - 1].angle() / Rat(l));  // minimal-angle lift

    if (!z.coherent()) cert.coherent_all_stages = false;

    const Rat step_bound = Rat(factorial(g), ak);
    for (unsigned l = 0; l <= g; ++l) {
      StageLevelRecord rec;
      rec.stage = k;
      rec.level = l;
      rec.to_v = cert.b_mask[k];
      rec.root_property = circle_pow(z.levels[l], ak) == target.levels[l];
      rec.step_distance = circle_dist(z.levels[l], prev.levels[l]);
      rec.step_bound = step_bound;
      rec.step_ok = rec.step_distance <= step_bound;
      all_ok = all_ok && rec.root_property && rec.step_ok;
      cert.stage_records.push_back(std::move(rec));
    }
    snaps.push_back(z);
    prev = std::move(z);
  }
  all_ok = all_ok && cert.coherent_all_stages;

  for (std::size_t j = 0; j < stages; ++j) {
    for (std::size_t k = j + 1; k <= stages; ++k) {
      StarRecord sr{j, k, star_holds(schedule, j, k)};
      all_ok = all_ok && sr.ok;
      cert.star_checks.push_back(sr);
    }
  }

  for (std::size_t j = 0; j < stages; ++j) {
    for (std::size_t ell = j + 1; ell <= stages; ++ell) {
      Rat chain(0);
      for (std::size_t k = j + 1; k <= ell; ++k)
        chain += Rat(schedule.a[j] * factorial(schedule.gamma[k]), schedule.a[k]);
      for (unsigned l = 0; l <= schedule.gamma[j]; ++l) {
        TelescopeRecord tr;
        tr.j = j;
        tr.ell = ell;
        tr.level = l;
        tr.scaled_distance = Rat(schedule.a[j]) * circle_dist(snaps[ell].levels[l], snaps[j].levels[l]);
        tr.chain_bound = chain;
        tr.geometric_bound = cert.limit_bounds[j];
        tr.ok_chain = tr.scaled_distance <= tr.chain_bound;
        tr.ok_geometric = tr.scaled_distance <= tr.geometric_bound;
        all_ok = all_ok && tr.ok_chain && tr.ok_geometric;
        cert.telescopes.push_back(std::move(tr));
      }
    }
  }

  const SolenoidElement& final_z = snaps.back();
  for (std::size_t j = 0; j <= stages; ++j) {
    const SolenoidElement& target = cert.b_mask[j] ? v : w;
    for (unsigned l = 0; l <= schedule.gamma[j]; ++l) {
      LimitRecord lr;
      lr.j = j;
      lr.level = l;
      lr.to_v = cert.b_mask[j];
      lr.distance = circle_dist(circle_pow(final_z.levels[l], schedule.a[j]), target.levels[l]);
      lr.bound = cert.limit_bounds[j];
      lr.ok = lr.distance <= lr.bound;
      all_ok = all_ok && lr.ok;
      cert.limit_records.push_back(std::move(lr));
    }
  }

  cert.all_ok = all_ok;
  return {final_z, cert};
}

}  // namespace powerseq
