#pragma once

#include "powerseq/circle.hpp"
#include "powerseq/omega_sets.hpp"

#include <utility>
#include <vector>

namespace powerseq {

class not_thin_error : public error {
 public:
  using error::error;
};
class sup_not_computable_error : public error {
 public:
  using error::error;
};
class degenerate_epsilon_error : public error {
 public:
  using error::error;
};
class target_depth_error : public error {
 public:
  using error::error;
};

/// Finite truncation (z_0, ..., z_m) of a coherent sequence: level l
/// satisfies (z_l)^l = z_{l-1} exactly for every l >= 1.
struct SolenoidElement {
  std::vector<CirclePoint> levels;

  static SolenoidElement identity(std::size_t depth);
  std::size_t depth() const { return levels.empty() ? 0 : levels.size() - 1; }
  bool coherent() const;
  friend bool operator==(const SolenoidElement& a, const SolenoidElement& b) {
    return a.levels == b.levels;
  }
};

/// The coherent element with z_l = (t / l!) mod 1; coherence holds exactly.
SolenoidElement embed_rational(const Rat& t, std::size_t depth);

/// Stagewise data for the two-limit construction along a thin set: exact
/// tail-sup ratios eps_j, the factorial cutoffs gamma_j, and the verified
/// product inequality linking them.
struct ThinSchedule {
  std::vector<Int> a;           // a_0 .. a_stages, increasing elements of A
  std::vector<Rat> eps;         // eps_j = sup over l >= j of a_l / a_(l+1)
  std::vector<unsigned> gamma;  // gamma_0 = 0; gamma_(j+1) largest g with g! <= 1/sqrt(eps_j)
  std::size_t start_offset = 0;  // enumeration shift applied to avoid eps >= 1

  std::size_t stages() const { return a.empty() ? 0 : a.size() - 1; }
};

/// Builds the schedule for j <= stages. Requires a closed ratio form (the
/// factorial family), where consecutive ratios provably decrease so the
/// tail sup equals the current ratio.
ThinSchedule make_schedule(const OmegaSet& a_spec, std::size_t stages);

struct StageLevelRecord {
  std::size_t stage;
  unsigned level;
  bool to_v;           // stage target was v (true) or w (false)
  bool root_property;  // (z_stage at level)^(a_stage) equals the target component exactly
  Rat step_distance;   // distance to the previous stage element at this level
  Rat step_bound;      // gamma_stage! / a_stage
  bool step_ok;
};

struct StarRecord {
  std::size_t j, k;
  bool ok;  // (a_j/a_k) * gamma_k! <= sqrt(eps_j ... eps_(k-1)), compared by squaring
};

struct TelescopeRecord {
  std::size_t j, ell;
  unsigned level;
  Rat scaled_distance;  // a_j * d(z_ell, z_j) at this level
  Rat chain_bound;      // sum over k in (j, ell] of (a_j/a_k) * gamma_k!
  Rat geometric_bound;  // UB(sqrt(eps_j)) / (1 - UB(sqrt(eps_j)))
  bool ok_chain, ok_geometric;
};

struct LimitRecord {
  std::size_t j;
  unsigned level;
  bool to_v;
  Rat distance;  // d((z_final at level)^(a_j), target component)
  Rat bound;     // geometric bound for j
  bool ok;
};

struct BuildCertificate {
  ThinSchedule schedule;
  std::vector<bool> b_mask;
  std::vector<Rat> sqrt_eps_upper;  // rational upper bounds on sqrt(eps_j), slack < 1e-6
  std::vector<Rat> limit_bounds;    // UB/(1-UB) per stage index
  std::vector<StageLevelRecord> stage_records;
  std::vector<StarRecord> star_checks;
  std::vector<TelescopeRecord> telescopes;
  std::vector<LimitRecord> limit_records;
  bool coherent_all_stages = false;
  bool all_ok = false;
};

/// Runs the staged construction: stage k picks the a_k-th root of the
/// target component at level gamma_k nearest to the previous stage,
/// derives lower levels by coherence and lifts upper levels canonically
/// (minimal angle). b_mask[k] selects target v (true) or w (false).
std::pair<SolenoidElement, BuildCertificate> build(const ThinSchedule& schedule,
                                                   const std::vector<bool>& b_mask,
                                                   const SolenoidElement& v,
                                                   const SolenoidElement& w);

}  // namespace powerseq
