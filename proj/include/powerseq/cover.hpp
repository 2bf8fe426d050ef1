#pragma once

#include "powerseq/circle.hpp"

#include <map>
#include <vector>

namespace powerseq {

class horizon_exhausted_error : public error {
 public:
  horizon_exhausted_error(const std::string& msg, std::size_t stage,
                          std::vector<std::size_t> witness)
      : error(msg), stage_k(stage), witness_tuple(std::move(witness)) {}
  std::size_t stage_k;
  std::vector<std::size_t> witness_tuple;  // grid indices of an uncoverable tuple
};

/// Finite grid standing in for a compact space, together with a function
/// family f_n and limit g evaluated on it. Defaults to the power maps
/// f_n(x) = x^n with g = 1 on torsion grids; alternatively driven by an
/// explicit table n -> values.
struct GridInstance {
  std::vector<CirclePoint> grid;
  std::vector<CirclePoint> limit;                 // g at each grid point
  std::map<Int, std::vector<CirclePoint>> table;  // empty: use power maps
  std::size_t k_max = 1;

  static GridInstance power_maps(std::vector<CirclePoint> grid, std::size_t k_max);
  static GridInstance from_table(std::vector<CirclePoint> grid,
                                 std::map<Int, std::vector<CirclePoint>> table,
                                 std::vector<CirclePoint> limit, std::size_t k_max);

  CirclePoint value(std::size_t point, const Int& n) const;
  /// Candidate exponents in increasing order, capped by the horizon.
  std::vector<Int> candidates(const Int& horizon) const;
};

/// Torsion grid {p/q : q <= max_order} in lowest terms, sorted by angle.
std::vector<CirclePoint> torsion_grid(const Int& max_order);

struct CoverResult {
  std::size_t grid_size = 0;
  std::size_t k_max = 0;
  std::vector<std::vector<Int>> stage_sets;  // stage_sets[k-1] = S_k, pairwise disjoint
  std::vector<std::vector<Int>> b_sets;      // B_x per grid point, sorted
  std::vector<bool> stage_verified;          // exhaustive replay of the cover condition
};

/// Greedy finite subcover per stage k = 1..k_max: scan candidates in
/// increasing order (skipping earlier stages), keep an exponent when it
/// covers a still-uncovered k-tuple, stop once every tuple has a witness
/// within 1/k. Throws horizon_exhausted_error with the stuck tuple.
CoverResult select_covers(const GridInstance& inst, const Int& horizon);

struct FilterBaseReport {
  bool holds = false;
  std::vector<std::pair<std::size_t, Int>> witnesses;  // (k, exponent in S_k meeting every B)
  std::vector<std::size_t> failed_stages;
};

/// Checks that the intersection of the B-sets over the tuple meets S_k for
/// each k in [k_lo, k_hi] with k >= tuple size.
FilterBaseReport filter_base_check(const CoverResult& res, const std::vector<std::size_t>& tuple,
                                   std::size_t k_lo, std::size_t k_hi);

struct GEllReport {
  bool member = false;
  std::vector<std::size_t> witness_tuple;
  std::vector<Int> witness_intersection;
};

/// Searches all grid tuples of length ell (with repetition) for one whose
/// B-set intersection is contained in the candidate set.
GEllReport g_ell_membership(const CoverResult& res, const std::vector<Int>& candidate,
                            std::size_t ell);

}  // namespace powerseq
