#pragma once

#include "powerseq/circle.hpp"
#include "powerseq/intervals.hpp"
#include "powerseq/omega_sets.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace powerseq {

struct McResult {
  double estimate = 0.0;
  double stderr_estimate = 0.0;  // sqrt(p(1-p)/samples)
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Deterministic per-sample substreams: sample i depends only on (seed, i),
/// so results are independent of chunking and thread count.
std::uint64_t mc_substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Uniform Haar samples. Angles are dyadic rationals with 53 random bits,
/// so predicates can be evaluated exactly against rational data.
CirclePoint sample_circle(std::uint64_t seed, std::uint64_t index);
OrthElement sample_orth(std::uint64_t seed, std::uint64_t index);  // fair coin between components
TorusPoint sample_torus(std::size_t dim, std::uint64_t seed, std::uint64_t index);

McResult mc_haar_circle(const std::function<bool(const CirclePoint&)>& pred, std::uint64_t samples,
                        std::uint64_t seed, unsigned threads = 1);
McResult mc_haar_orth(const std::function<bool(const OrthElement&)>& pred, std::uint64_t samples,
                      std::uint64_t seed, unsigned threads = 1);
McResult mc_haar_torus(std::size_t dim, const std::function<bool(const TorusPoint&)>& pred,
                       std::uint64_t samples, std::uint64_t seed, unsigned threads = 1);

/// Exact-measure evidence for the shrinking of the near-1 constraint set
/// along a prefix of b. The sequence element after each added constraint
/// is the exact Lebesgue measure of the running intersection.
struct MeasureReport {
  std::vector<Int> constraints;  // exponents actually used (value 0 skipped)
  Rat eps;
  std::size_t requested_depth = 0;
  std::vector<Rat> exact_sequence;
  bool truncated = false;  // interval budget hit before the requested depth
  std::size_t interval_budget = 0;
  std::size_t final_interval_count = 0;
  IntervalUnion final_set;
  std::optional<McResult> mc;
  bool mc_within_4sigma = true;
};

MeasureReport c_set_approx(const OmegaSet& b, const Rat& eps, std::size_t m,
                           std::size_t interval_budget = 1'000'000);

/// Monte Carlo cross-check of the report's final exact measure; flags the
/// report when the estimate strays beyond 4 standard errors.
void attach_mc_cross_check(MeasureReport& report, std::uint64_t samples, std::uint64_t seed,
                           unsigned threads = 1);

}  // namespace powerseq
