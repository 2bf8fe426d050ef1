#include "powerseq/measure.hpp"

#include <cmath>
#include <thread>
#include <vector>

namespace powerseq {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rat dyadic_angle(std::uint64_t word) {
  // 53 random bits over 2^53: exact dyadic rational in [0,1)
  const std::uint64_t num = word >> 11;
  return Rat(Int(num), Int(1) << 53);
}

template <typename Sample, typename Pred>
McResult run_mc(const Sample& sample, const Pred& pred, std::uint64_t samples, std::uint64_t seed,
                unsigned threads) {
  if (samples == 0) throw error("mc: samples must be >= 1");
  if (threads == 0) threads = 1;
  std::uint64_t hits = 0;
  if (threads == 1) {
    for (std::uint64_t i = 0; i < samples; ++i) {
      if (pred(sample(seed, i))) ++hits;
    }
  } else {
    std::vector<std::uint64_t> partial(threads, 0);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (samples + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        std::uint64_t from = t * chunk;
        std::uint64_t to = std::min<std::uint64_t>(samples, from + chunk);
        std::uint64_t h = 0;
        for (std::uint64_t i = from; i < to; ++i) {
          if (pred(sample(seed, i))) ++h;
        }
        partial[t] = h;
      });
    }
    for (auto& th : pool) th.join();
    for (auto h : partial) hits += h;
  }
  McResult r;
  r.hits = hits;
  r.samples = samples;
  r.seed = seed;
  r.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  r.stderr_estimate = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(samples));
  return r;
}

}  // namespace

std::uint64_t mc_substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ (stream * 0xD6E8FEB86659FD93ULL)) + index);
}

CirclePoint sample_circle(std::uint64_t seed, std::uint64_t index) {
  return CirclePoint(dyadic_angle(mc_substream(seed, 0, index)));
}

OrthElement sample_orth(std::uint64_t seed, std::uint64_t index) {
  bool flip = (mc_substream(seed, 1, index) & 1) != 0;  // Haar splits evenly across cosets
  return OrthElement{CirclePoint(dyadic_angle(mc_substream(seed, 2, index))), flip};
}

TorusPoint sample_torus(std::size_t dim, std::uint64_t seed, std::uint64_t index) {
  TorusPoint p;
  p.coords.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    p.coords.push_back(CirclePoint(dyadic_angle(mc_substream(seed, 16 + j, index))));
  }
  return p;
}

McResult mc_haar_circle(const std::function<bool(const CirclePoint&)>& pred, std::uint64_t samples,
                        std::uint64_t seed, unsigned threads) {
  return run_mc([](std::uint64_t s, std::uint64_t i) { return sample_circle(s, i); }, pred, samples,
                seed, threads);
}

McResult mc_haar_orth(const std::function<bool(const OrthElement&)>& pred, std::uint64_t samples,
                      std::uint64_t seed, unsigned threads) {
  return run_mc([](std::uint64_t s, std::uint64_t i) { return sample_orth(s, i); }, pred, samples,
                seed, threads);
}

McResult mc_haar_torus(std::size_t dim, const std::function<bool(const TorusPoint&)>& pred,
                       std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  return run_mc([dim](std::uint64_t s, std::uint64_t i) { return sample_torus(dim, s, i); }, pred,
                samples, seed, threads);
}

MeasureReport c_set_approx(const OmegaSet& b, const Rat& eps, std::size_t m,
                           std::size_t interval_budget) {
  if (m < 1) throw error("c_set_approx: depth must be >= 1");
  if (eps <= 0 || eps > Rat(1, 2)) throw error("c_set_approx: eps must be in (0, 1/2]");
  MeasureReport rep;
  rep.eps = eps;
  rep.requested_depth = m;
  rep.interval_budget = interval_budget;

  // First m nonzero elements: the n = 0 constraint is vacuous (x^0 = 1).
  SetEnumerator en(b, {});
  while (rep.constraints.size() < m) {
    auto v = en.next();
    if (!v) break;
    if (*v == 0) continue;
    rep.constraints.push_back(std::move(*v));
  }
  if (rep.constraints.empty()) throw error("c_set_approx: no usable constraints");

  IntervalUnion running = IntervalUnion::full();
  for (const Int& n : rep.constraints) {
    running = intersect(running, near_one_preimage(n, eps));
    rep.exact_sequence.push_back(running.measure());
    if (running.size() > interval_budget) {
      rep.truncated = true;
      break;
    }
  }
  rep.final_interval_count = running.size();
  rep.final_set = std::move(running);
  if (rep.truncated) rep.constraints.resize(rep.exact_sequence.size());
  return rep;
}

void attach_mc_cross_check(MeasureReport& report, std::uint64_t samples, std::uint64_t seed,
                           unsigned threads) {
  const IntervalUnion& target = report.final_set;
  report.mc = mc_haar_circle([&](const CirclePoint& x) { return target.contains(x.angle()); },
                             samples, seed, threads);
  double exact = rat_to_double(report.exact_sequence.back());
  double dev = std::abs(report.mc->estimate - exact);
  // Guard against a degenerate zero stderr when p-hat lands on 0 or 1.
  double sigma = std::max(report.mc->stderr_estimate, 1e-12);
  report.mc_within_4sigma = dev <= 4.0 * sigma;
}

}  // namespace powerseq
