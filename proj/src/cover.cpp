#include "powerseq/cover.hpp"

#include <algorithm>

namespace powerseq {

GridInstance GridInstance::power_maps(std::vector<CirclePoint> grid, std::size_t k_max) {
  if (grid.empty()) throw error("GridInstance: empty grid");
  if (k_max < 1) throw error("GridInstance: k_max must be >= 1");
  GridInstance g;
  g.limit.assign(grid.size(), CirclePoint());  // powers accumulate at the identity
  g.grid = std::move(grid);
  g.k_max = k_max;
  return g;
}

GridInstance GridInstance::from_table(std::vector<CirclePoint> grid,
                                      std::map<Int, std::vector<CirclePoint>> table,
                                      std::vector<CirclePoint> limit, std::size_t k_max) {
  if (grid.empty()) throw error("GridInstance: empty grid");
  if (k_max < 1) throw error("GridInstance: k_max must be >= 1");
  if (table.empty()) throw error("GridInstance: empty function table");
  for (const auto& [n, row] : table) {
    if (n < 0) throw error("GridInstance: negative exponent in table");
    if (row.size() != grid.size()) throw error("GridInstance: table row does not match grid size");
  }
  if (limit.empty()) limit.assign(grid.size(), CirclePoint());
  if (limit.size() != grid.size()) throw error("GridInstance: limit row does not match grid size");
  GridInstance g;
  g.grid = std::move(grid);
  g.limit = std::move(limit);
  g.table = std::move(table);
  g.k_max = k_max;
  return g;
}

CirclePoint GridInstance::value(std::size_t point, const Int& n) const {
  if (table.empty()) return circle_pow(grid[point], n);
  auto it = table.find(n);
  if (it == table.end()) throw error("GridInstance: exponent missing from table");
  return it->second[point];
}

std::vector<Int> GridInstance::candidates(const Int& horizon) const {
  std::vector<Int> out;
  if (table.empty()) {
    for (Int n = 0; n <= horizon; ++n) out.push_back(n);
  } else {
    for (const auto& [n, row] : table) {
      if (n > horizon) break;
      out.push_back(n);
    }
  }
  return out;
}

std::vector<CirclePoint> torsion_grid(const Int& max_order) {
  if (max_order < 1) throw error("torsion_grid: max order must be >= 1");
  std::vector<CirclePoint> pts;
  for (Int q = 1; q <= max_order; ++q) {
    for (Int p = 0; p < q; ++p) {
      if (gcd(p, q) == 1) pts.push_back(CirclePoint::from(p, q));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

namespace {

// Next tuple in the odometer order; false when wrapped around.
bool advance(std::vector<std::size_t>& tuple, std::size_t base) {
  for (std::size_t i = tuple.size(); i-- > 0;) {
    if (++tuple[i] < base) return true;
    tuple[i] = 0;
  }
  return false;
}

}  // namespace

CoverResult select_covers(const GridInstance& inst, const Int& horizon) {
  CoverResult res;
  res.grid_size = inst.grid.size();
  res.k_max = inst.k_max;
  const std::size_t g = inst.grid.size();
  auto candidates = inst.candidates(horizon);
  std::vector<char> used(candidates.size(), 0);

  for (std::size_t k = 1; k <= inst.k_max; ++k) {
    const Rat tol(1, Int(k));
    // Tuples still lacking a witness, as odometer index vectors.
    std::vector<std::vector<std::size_t>> uncovered;
    {
      std::vector<std::size_t> t(k, 0);
      do {
        uncovered.push_back(t);
      } while (advance(t, g));
    }
    std::vector<Int> stage;
    for (std::size_t ci = 0; ci < candidates.size() && !uncovered.empty(); ++ci) {
      if (used[ci]) continue;  // A_k drops exponents claimed by earlier stages
      const Int& n = candidates[ci];
      std::vector<char> close(g, 0);
      for (std::size_t i = 0; i < g; ++i)
        close[i] = circle_dist(inst.value(i, n), inst.limit[i]) < tol ? 1 : 0;
      std::size_t kept = 0;
      bool useful = false;
      for (std::size_t ti = 0; ti < uncovered.size(); ++ti) {
        bool covered = std::all_of(uncovered[ti].begin(), uncovered[ti].end(),
                                   [&](std::size_t i) { return close[i] != 0; });
        if (covered) {
          useful = true;
          continue;
        }
        if (kept != ti) uncovered[kept] = std::move(uncovered[ti]);
        ++kept;
      }
      uncovered.resize(kept);
      if (useful) {
        stage.push_back(n);
        used[ci] = 1;
      }
    }
    if (!uncovered.empty()) {
      throw horizon_exhausted_error("select_covers: no witness below the horizon for a " +
                                        std::to_string(k) + "-tuple",
                                    k, uncovered.front());
    }
    res.stage_sets.push_back(std::move(stage));
  }

  // B_x = union over k of {n in S_k : d(f_n(x), g(x)) < 1/k}
  res.b_sets.assign(g, {});
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t k = 1; k <= inst.k_max; ++k) {
      const Rat tol(1, Int(k));
      for (const Int& n : res.stage_sets[k - 1]) {
        if (circle_dist(inst.value(i, n), inst.limit[i]) < tol) res.b_sets[i].push_back(n);
      }
    }
    std::sort(res.b_sets[i].begin(), res.b_sets[i].end());
  }

  // Exhaustive replay of the cover condition for each stage.
  for (std::size_t k = 1; k <= inst.k_max; ++k) {
    const Rat tol(1, Int(k));
    std::vector<std::vector<char>> close;
    for (const Int& n : res.stage_sets[k - 1]) {
      std::vector<char> row(g, 0);
      for (std::size_t i = 0; i < g; ++i)
        row[i] = circle_dist(inst.value(i, n), inst.limit[i]) < tol ? 1 : 0;
      close.push_back(std::move(row));
    }
    bool ok = true;
    std::vector<std::size_t> t(k, 0);
    do {
      bool witnessed = false;
      for (const auto& row : close) {
        if (std::all_of(t.begin(), t.end(), [&](std::size_t i) { return row[i] != 0; })) {
          witnessed = true;
          break;
        }
      }
      if (!witnessed) {
        ok = false;
        break;
      }
    } while (advance(t, g));
    res.stage_verified.push_back(ok);
  }
  return res;
}

FilterBaseReport filter_base_check(const CoverResult& res, const std::vector<std::size_t>& tuple,
                                   std::size_t k_lo, std::size_t k_hi) {
  if (tuple.empty()) throw error("filter_base_check: empty tuple");
  for (auto i : tuple) {
    if (i >= res.grid_size) throw error("filter_base_check: tuple index out of range");
  }
  FilterBaseReport rep;
  std::size_t from = std::max(k_lo, tuple.size());
  std::size_t to = std::min(k_hi, res.k_max);
  for (std::size_t k = from; k <= to; ++k) {
    bool found = false;
    for (const Int& n : res.stage_sets[k - 1]) {
      bool in_all = true;
      for (auto i : tuple) {
        if (!std::binary_search(res.b_sets[i].begin(), res.b_sets[i].end(), n)) {
          in_all = false;
          break;
        }
      }
      if (in_all) {
        rep.witnesses.emplace_back(k, n);
        found = true;
        break;
      }
    }
    if (!found) rep.failed_stages.push_back(k);
  }
  rep.holds = rep.failed_stages.empty();
  return rep;
}

GEllReport g_ell_membership(const CoverResult& res, const std::vector<Int>& candidate,
                            std::size_t ell) {
  if (ell < 1) throw error("g_ell_membership: ell must be >= 1");
  double tuples = 1;
  for (std::size_t i = 0; i < ell; ++i) tuples *= static_cast<double>(res.grid_size);
  if (tuples > 4e6) throw error("g_ell_membership: tuple space too large");

  GEllReport rep;
  std::vector<std::size_t> t(ell, 0);
  do {
    std::vector<Int> inter = res.b_sets[t[0]];
    for (std::size_t i = 1; i < ell && !inter.empty(); ++i) {
      std::vector<Int> next;
      std::set_intersection(inter.begin(), inter.end(), res.b_sets[t[i]].begin(),
                            res.b_sets[t[i]].end(), std::back_inserter(next));
      inter = std::move(next);
    }
    bool inside = std::all_of(inter.begin(), inter.end(), [&](const Int& n) {
      return std::binary_search(candidate.begin(), candidate.end(), n);
    });
    if (inside) {
      rep.member = true;
      rep.witness_tuple = t;
      rep.witness_intersection = std::move(inter);
      return rep;
    }
  } while (advance(t, res.grid_size));
  return rep;
}

}  // namespace powerseq
