#pragma once

#include "powerseq/circle.hpp"
#include "powerseq/filters.hpp"
#include "powerseq/omega_sets.hpp"

#include <atomic>
#include <optional>
#include <string>

namespace powerseq {

/// Outcome of a convergence question. Exact statuses are certified facts about
/// torsion inputs, re-checkable from the certificate; empirical statuses
/// carry window evidence only.
struct ConvergenceVerdict {
  enum class Status { ConvergesExact, DivergesExact, EmpiricalConverges, EmpiricalDiverges, Unknown };
  Status status = Status::Unknown;
  std::string certificate;
  Int modulus = 0;                   // DivergesExact: order with infinitely many missed exponents
  std::optional<OmegaSet> witness;   // membership witness for filter verdicts
  std::optional<Int> witness_exponent;  // a concrete diverging exponent, when one was extracted
  Rat witness_distance = Rat(0);

  bool converges_exact() const { return status == Status::ConvergesExact; }
  bool diverges_exact() const { return status == Status::DivergesExact; }
};

/// Does x^n -> 1 along b? Exact for every representable (torsion) point:
/// for x of order q the sequence converges iff only finitely many n in b
/// avoid divisibility by q.
ConvergenceVerdict in_C_B(const CirclePoint& x, const OmegaSet& b);

/// Componentwise on a finite torus power.
ConvergenceVerdict in_C_B_torus(const TorusPoint& x, const OmegaSet& b);

/// O(2): rotations reduce to the circle; reflections converge iff odd
/// exponents eventually leave b.
ConvergenceVerdict in_C_B_orth(const OrthElement& g, const OmegaSet& b);

/// Is there a member B of the filter with x^n -> 1 along B? Decided in
/// closed form for the shipped filter kinds; `search_budget` caps the
/// number of candidate members examined for generated filters.
ConvergenceVerdict in_D_F(const CirclePoint& x, const FilterSpec& f, std::uint64_t search_budget = 64);

/// Exact max of d(x^n, 1) over the enumeration window [start, end) of b.
/// Checks `cancel` between chunks and throws on cancellation.
Rat empirical_tail(const CirclePoint& x, const OmegaSet& b, std::size_t start_index,
                   std::size_t end_index, const std::atomic<bool>* cancel = nullptr);

struct HadamardCounterexampleReport {
  Int q_max;
  std::vector<Int> convergent_orders;  // orders converging along C = {2^(2k)}
  std::vector<std::string> violations;
  bool pass = false;
  std::size_t orders_checked = 0;
};

/// Along C = {2^(2k)}, a torsion point converges iff its order is a power
/// of two, and every such point also converges along B = {2^(2k+1)}.
/// Checks all orders q <= q_max exhaustively.
HadamardCounterexampleReport hadamard_counterexample_check(const Int& q_max);

}  // namespace powerseq
