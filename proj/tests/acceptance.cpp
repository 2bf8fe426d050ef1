// Acceptance suite: runs every release criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include "powerseq/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <sys/wait.h>

using namespace powerseq;

namespace {

struct Outcome {
  bool pass = false;
  std::string note;
};

struct Criterion {
  int id;
  std::string label;
  double time_limit_s;  // 0 = no limit
  std::function<Outcome()> run;
};

std::string cli_path;

std::optional<std::pair<int, std::string>> run_command(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return std::nullopt;
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  int rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return std::make_pair(rc, out);
}

// --- criterion 1: torsion convergence oracle -------------------------------------

Outcome torsion_oracle() {
  OmegaSet factorials = OmegaSet::factorial();
  OmegaSet shifted = OmegaSet::factorial_shift(1);
  std::size_t points = 0;
  for (Int q = 1; q <= 200; ++q) {
    for (Int p = 0; p < q; ++p) {
      if (gcd(p, q) != 1) continue;
      CirclePoint x = CirclePoint::from(p, q);
      ++points;
      if (!in_C_B(x, factorials).converges_exact())
        return {false, "order " + q.str() + " does not converge along {k!}"};
      if (q >= 2 && !in_C_B(x, shifted).diverges_exact())
        return {false, "order " + q.str() + " does not diverge along {k!+1}"};
    }
  }
  return {true, std::to_string(points) + " torsion points checked exhaustively"};
}

// --- criterion 2: nice-filter nullity evidence ------------------------------------

Outcome nullity_evidence() {
  const Rat eps(1, 10);
  auto rep = c_set_approx(OmegaSet::factorial_shift(1), eps, 5);
  attach_mc_cross_check(rep, 100'000, 7);
  if (rep.truncated) return {false, "interval budget hit before depth 5"};
  if (rep.exact_sequence.size() != 5) return {false, "expected 5 exact values"};
  if (rep.exact_sequence.front() != Rat(1, 5))
    return {false, "first exact value is " + rat_to_string(rep.exact_sequence.front()) +
                       ", expected 1/5"};
  for (std::size_t i = 1; i < rep.exact_sequence.size(); ++i) {
    if (rep.exact_sequence[i] > rep.exact_sequence[i - 1])
      return {false, "sequence increases at step " + std::to_string(i)};
  }
  if (!(rep.exact_sequence.back() < Rat(1, 5))) return {false, "final value not below 1/5"};
  if (!rep.mc_within_4sigma)
    return {false, "Monte Carlo estimate strays beyond 4 sigma of the exact value"};
  std::ostringstream note;
  note << "final measure " << rat_to_string(rep.exact_sequence.back()) << ", mc "
       << rep.mc->estimate << " +- " << rep.mc->stderr_estimate;
  return {true, note.str()};
}

// --- criterion 3: O(2) half measure ------------------------------------------------

Outcome o2_half_measure() {
  OmegaSet evens = OmegaSet::multiples(2);
  // exact decomposition among torsion rotations of order <= 100
  std::vector<Rat> converger_angles;
  for (Int q = 1; q <= 100; ++q) {
    for (Int p = 0; p < q; ++p) {
      if (gcd(p, q) != 1) continue;
      OrthElement rot{CirclePoint::from(p, q), false};
      if (in_C_B_orth(rot, evens).converges_exact()) converger_angles.push_back(Rat(p, q));
    }
  }
  if (converger_angles != std::vector<Rat>{Rat(0), Rat(1, 2)})
    return {false, "rotation converger set is not exactly {0, 1/2}"};
  for (Int q = 2; q <= 50; ++q) {
    if (!in_C_B_orth(OrthElement{CirclePoint::from(1, q), true}, evens).converges_exact())
      return {false, "a reflection fails to converge along even exponents"};
  }

  const Rat eps(1, 10);
  IntervalUnion rot_set = IntervalUnion::full();
  for (int k = 1; k <= 20; ++k) rot_set = intersect(rot_set, near_one_preimage(2 * k, eps));
  Rat exact_total = Rat(1, 2) + rot_set.measure() / 2;

  auto pred = [&](const OrthElement& g) {
    return g.flip ? true : rot_set.contains(g.angle.angle());
  };
  auto mc = mc_haar_orth(pred, 100'000, 7);
  double sigma = std::max(mc.stderr_estimate, 1e-12);
  if (std::abs(mc.estimate - rat_to_double(exact_total)) > 4 * sigma)
    return {false, "estimate strays beyond 4 sigma of the exact value"};
  if (!(mc.estimate >= 0.5 && mc.estimate <= 0.5 + 2 * rat_to_double(eps) + 4 * sigma))
    return {false, "estimate outside [1/2, 1/2 + 2 eps + 4 sigma]"};
  std::ostringstream note;
  note << "exact " << rat_to_string(exact_total) << ", mc " << mc.estimate;
  return {true, note.str()};
}

// --- criterion 4: Hadamard counterexample ------------------------------------------

Outcome hadamard_counterexample() {
  auto rep = hadamard_counterexample_check(256);
  if (!rep.pass) return {false, rep.violations.front()};
  std::vector<Int> expected;
  for (Int q = 1; q <= 256; q *= 2) expected.push_back(q);
  if (rep.convergent_orders != expected)
    return {false, "convergent orders are not exactly the powers of two up to 256"};
  return {true, "256 orders checked; convergers = {1,2,4,...,256}, all converge along B"};
}

// --- criteria 5 and 6: solenoid build ----------------------------------------------

struct BuildArtifacts {
  ThinSchedule schedule;
  std::vector<bool> mask;
  SolenoidElement v, w, z;
  BuildCertificate cert;
};

std::optional<BuildArtifacts>& build_cache() {
  static std::optional<BuildArtifacts> cache;
  return cache;
}

const BuildArtifacts& built() {
  auto& cache = build_cache();
  if (!cache) {
    BuildArtifacts art;
    art.schedule = make_schedule(OmegaSet::tail(OmegaSet::factorial(), 1), 6);
    art.mask.assign(7, false);
    for (std::size_t j = 0; j <= 6; j += 2) art.mask[j] = true;
    art.v = embed_rational(Rat(1, 2), 4);
    art.w = SolenoidElement::identity(4);
    auto [z, cert] = build(art.schedule, art.mask, art.v, art.w);
    art.z = z;
    art.cert = cert;
    cache = std::move(art);
  }
  return *cache;
}

Outcome solenoid_certificate() {
  const auto& art = built();
  const auto& s = art.schedule;
  for (std::size_t j = 0; j <= 6; ++j) {
    if (s.eps[j] != Rat(1, j + 3))
      return {false, "eps_" + std::to_string(j) + " is not 1/" + std::to_string(j + 3)};
    if (j > 0 && s.gamma[j] < s.gamma[j - 1]) return {false, "gamma not monotone"};
    if (Rat(s.a[j], 1) <= 0) return {false, "bad schedule element"};
  }
  for (std::size_t j = 0; j + 1 <= 6; ++j) {
    if (Rat(s.a[j], s.a[j + 1]) > s.eps[j]) return {false, "ratio exceeds eps"};
  }
  if (!art.cert.coherent_all_stages) return {false, "a stage element lost coherence"};
  for (const auto& r : art.cert.stage_records) {
    if (!r.root_property)
      return {false, "condition (root property) fails at stage " + std::to_string(r.stage)};
    if (!r.step_ok)
      return {false, "step bound fails at stage " + std::to_string(r.stage)};
  }
  for (const auto& sc : art.cert.star_checks) {
    if (!sc.ok) return {false, "product inequality fails"};
  }
  for (const auto& t : art.cert.telescopes) {
    if (!t.ok_chain || !t.ok_geometric) return {false, "telescoped distance exceeds its bound"};
  }
  for (const auto& lr : art.cert.limit_records) {
    if (!lr.ok) return {false, "final distance exceeds the certified bound"};
  }
  if (!art.cert.all_ok) return {false, "certificate flag not set"};
  return {true, std::to_string(art.cert.limit_records.size()) + " certified (stage, level) bounds"};
}

Outcome circle_level_separation() {
  const auto& art = built();
  const CirclePoint x = art.z.levels[0];
  const CirclePoint v0 = art.v.levels[0];
  const CirclePoint one;
  if (v0 == one) return {false, "target and identity coincide"};
  for (std::size_t j = 0; j <= 6; ++j) {
    const CirclePoint& target = art.mask[j] ? v0 : one;
    Rat d = circle_dist(circle_pow(x, art.schedule.a[j]), target);
    if (d > art.cert.limit_bounds[j])
      return {false, "stage " + std::to_string(j) + " distance exceeds the certified bound"};
  }
  // distinct limits: the last stages approach 1/2 and 0 well inside
  // disjoint neighborhoods, and the final stage lands exactly
  Rat d_b = circle_dist(circle_pow(x, art.schedule.a[6]), v0);
  Rat d_c = circle_dist(circle_pow(x, art.schedule.a[5]), one);
  if (d_b != 0) return {false, "final stage misses the target exactly"};
  if (!(d_c < Rat(1, 4))) return {false, "identity-side tail not inside its quarter neighborhood"};
  return {true, "x = " + rat_to_string(x.angle()) + " splits toward 1/2 along B and 1 along C"};
}

// --- criterion 7: finite cover -----------------------------------------------------

Outcome cover_criterion() {
  auto inst = GridInstance::power_maps(torsion_grid(6), 3);
  CoverResult res;
  try {
    res = select_covers(inst, 10'000);
  } catch (const horizon_exhausted_error& e) {
    return {false, std::string("cover search exhausted the horizon: ") + e.what()};
  }
  for (std::size_t k = 1; k <= 3; ++k) {
    if (!res.stage_verified[k - 1])
      return {false, "cover condition replay failed at stage " + std::to_string(k)};
  }
  for (std::size_t i = 0; i < res.grid_size; ++i) {
    if (!filter_base_check(res, {i}, 1, 3).holds)
      return {false, "filter base fails for a singleton"};
  }
  for (std::size_t i = 0; i < res.grid_size; ++i) {
    for (std::size_t j = 0; j < res.grid_size; ++j) {
      if (!filter_base_check(res, {i, j}, 2, 3).holds)
        return {false, "filter base fails for a pair"};
    }
  }
  std::ostringstream note;
  note << "grid " << res.grid_size << ", stage sizes";
  for (const auto& s : res.stage_sets) note << " " << s.size();
  return {true, note.str()};
}

// --- criterion 8: identity laws as property tests ----------------------------------

OmegaSet random_decidable_set(std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, 6), small(1, 9), base(2, 5), c(0, 3);
  switch (pick(rng)) {
    case 0:
      return OmegaSet::factorial();
    case 1:
      return OmegaSet::factorial_shift(c(rng));
    case 2:
      return OmegaSet::powers(base(rng));
    case 3:
      return OmegaSet::multiples(small(rng));
    case 4:
      return OmegaSet::arithmetic(c(rng), small(rng));
    case 5:
      return OmegaSet::tail(OmegaSet::factorial_shift(c(rng)), small(rng) % 4);
    default:
      return OmegaSet::strided(OmegaSet::powers(base(rng)), c(rng) % 2, 1 + small(rng) % 3);
  }
}

CirclePoint random_torsion(std::mt19937& rng, int max_order = 48) {
  std::uniform_int_distribution<int> den(1, max_order);
  int q = den(rng);
  std::uniform_int_distribution<int> num(0, q - 1);
  return CirclePoint(Rat(num(rng), q));
}

Outcome identity_laws() {
  std::mt19937 rng(12345);
  const int cases = 1000;

  for (int i = 0; i < cases; ++i) {  // C^X_B = D^X_(B up)
    OmegaSet b = random_decidable_set(rng);
    CirclePoint x = random_torsion(rng);
    if (in_C_B(x, b).status != in_D_F(x, FilterSpec::principal(b)).status)
      return {false, "set verdict disagrees with its principal filter"};
  }

  for (int i = 0; i < cases; ++i) {  // D^X_F = D^X_(F tilde)
    OmegaSet b = random_decidable_set(rng);
    CirclePoint x = random_torsion(rng);
    auto f = FilterSpec::principal(b);
    if (in_D_F(x, f).status != in_D_F(x, f.tilde()).status)
      return {false, "tilde closure changes a principal verdict"};
    if (in_D_F(x, FilterSpec::nice_f()).status != in_D_F(x, FilterSpec::nice_f().tilde()).status)
      return {false, "tilde closure changes a nice-filter verdict"};
  }

  std::uniform_int_distribution<int> off(0, 2), stride(2, 4), drop(1, 5), factor(2, 4);
  for (int i = 0; i < cases; ++i) {  // antitonicity on decidable pairs
    OmegaSet b = random_decidable_set(rng);
    OmegaSet smaller = (i % 2 == 0) ? OmegaSet::tail(b, drop(rng))
                                    : OmegaSet::strided(b, off(rng), stride(rng));
    CirclePoint x = random_torsion(rng);
    if (in_C_B(x, b).converges_exact() && !in_C_B(x, smaller).converges_exact())
      return {false, "a subset broke exact convergence"};
  }

  int closures = 0;
  for (int i = 0; i < cases; ++i) {  // subgroup closure under product and inverse
    OmegaSet b = random_decidable_set(rng);
    CirclePoint x = random_torsion(rng);
    CirclePoint y = random_torsion(rng);
    if (in_C_B(x, b).converges_exact() && in_C_B(y, b).converges_exact()) {
      ++closures;
      if (!in_C_B(x + y, b).converges_exact())
        return {false, "product of convergent points diverges"};
      if (!in_C_B(x.inverse(), b).converges_exact())
        return {false, "inverse of a convergent point diverges"};
    }
  }
  return {true, "4 identities x 1000 cases (" + std::to_string(closures) + " closure pairs)"};
}

// --- criterion 9: torsion direction of the neighborhood family ---------------------

Outcome bohr_torsion_direction() {
  auto fam = FilterSpec::bohr_family();
  std::size_t points = 0;
  for (Int q = 1; q <= 100; ++q) {
    for (Int p = 0; p < q; ++p) {
      if (gcd(p, q) != 1) continue;
      CirclePoint w = CirclePoint::from(p, q);
      auto v = in_D_F(w, fam);
      ++points;
      if (!v.converges_exact()) return {false, "order " + q.str() + " not accepted"};
      if (!v.witness || !v.witness->structurally_equal(OmegaSet::multiples(q)))
        return {false, "order " + q.str() + " witness is not the multiples of the order"};
    }
  }
  return {true, std::to_string(points) + " torsion points accepted with {jk} witnesses"};
}

// --- criterion 10: byte-identical reports ------------------------------------------

Outcome determinism() {
  if (cli_path.empty()) return {false, "CLI path not provided (--cli)"};
  for (const auto& name : experiment_names()) {
    std::string cmd = "'" + cli_path + "' --seed 7 experiment " + name + " 2>/dev/null";
    auto first = run_command(cmd);
    auto second = run_command(cmd);
    if (!first || !second) return {false, "could not run the CLI for " + name};
    if (first->first != 0)
      return {false, name + " exited with code " + std::to_string(first->first)};
    if (first->second != second->second) return {false, name + " reports differ between runs"};
    if (first->second.empty()) return {false, name + " produced no report"};
  }
  return {true, std::to_string(experiment_names().size()) + " experiments, two runs each"};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") cli_path = argv[i + 1];
  }

  std::vector<Criterion> criteria = {
      {1, "torsion convergence oracle along {k!} and {k!+1}, orders <= 200", 10, torsion_oracle},
      {2, "nice-filter nullity evidence: exact shrinking sequence + MC cross-check", 60,
       nullity_evidence},
      {3, "O(2) half measure: exact decomposition and windowed MC estimate", 60, o2_half_measure},
      {4, "Hadamard counterexample: convergers along {4^k} are powers of two, orders <= 256", 10,
       hadamard_counterexample},
      {5, "solenoid build certificate: schedule invariants and exact stage bounds", 30,
       solenoid_certificate},
      {6, "circle-level separation: distinct limits along the two halves of the thin set", 30,
       circle_level_separation},
      {7, "finite cover on the torsion grid with filter-base property", 60, cover_criterion},
      {8, "identity laws as randomized property tests (1000 cases each)", 0, identity_laws},
      {9, "torsion points enter the neighborhood-family limit set with {jk} witnesses", 10,
       bohr_torsion_direction},
      {10, "experiments emit byte-identical reports under a fixed seed", 0, determinism},
  };

  bool all = true;
  for (auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool timed_out = c.time_limit_s > 0 && secs > c.time_limit_s;
    bool pass = out.pass && !timed_out;
    all = all && pass;
    std::printf("[%s] criterion %2d: %s (%.2f s)%s\n", pass ? "PASS" : "FAIL", c.id,
                c.label.c_str(), secs,
                timed_out ? " [time limit exceeded]" : "");
    if (!out.note.empty()) std::printf("        %s\n", out.note.c_str());
  }
  std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILURES present");
  return all ? 0 : 1;
}
