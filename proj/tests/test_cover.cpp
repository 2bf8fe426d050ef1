#include "powerseq/cover.hpp"

#include <doctest.h>

using namespace powerseq;

TEST_CASE("torsion grids") {
  auto g4 = torsion_grid(4);
  REQUIRE(g4.size() == 6);  // 0, 1/4, 1/3, 1/2, 2/3, 3/4
  CHECK(g4.front() == CirclePoint());
  for (std::size_t i = 0; i + 1 < g4.size(); ++i) CHECK(g4[i] < g4[i + 1]);
  for (const auto& p : g4) CHECK(p.order() <= 4);
}

TEST_CASE("cover selection on a small torsion grid") {
  auto inst = GridInstance::power_maps(torsion_grid(4), 2);
  auto res = select_covers(inst, 1000);

  REQUIRE(res.stage_sets.size() == 2);
  CHECK(res.stage_verified == std::vector<bool>{true, true});
  // n = 0 satisfies every point at k = 1 (distance 0 < 1), so greedy takes it
  CHECK(res.stage_sets[0] == std::vector<Int>{0});

  SUBCASE("stages are disjoint") {
    for (const Int& n : res.stage_sets[1])
      CHECK(std::find(res.stage_sets[0].begin(), res.stage_sets[0].end(), n) ==
            res.stage_sets[0].end());
  }

  SUBCASE("the lcm exponent kills every grid point") {
    // 12 = lcm(1..4): an explicit witness that covers exist at any k
    for (const auto& x : inst.grid) CHECK(circle_pow(x, 12).is_identity());
  }

  SUBCASE("B-sets witness convergence at stage precision") {
    for (std::size_t i = 0; i < inst.grid.size(); ++i) {
      CHECK_FALSE(res.b_sets[i].empty());
      for (std::size_t k = 1; k <= res.k_max; ++k) {
        for (const Int& n : res.stage_sets[k - 1]) {
          bool in_b = std::binary_search(res.b_sets[i].begin(), res.b_sets[i].end(), n);
          bool close = circle_dist(circle_pow(inst.grid[i], n), CirclePoint()) < Rat(1, k);
          if (close) CHECK(in_b);
        }
      }
    }
  }
}

TEST_CASE("single-point grid takes the smallest qualifying exponent") {
  auto inst = GridInstance::power_maps({CirclePoint(Rat(1, 2))}, 1);
  auto res = select_covers(inst, 100);
  CHECK(res.stage_sets[0] == std::vector<Int>{0});
}

TEST_CASE("deep stages on the order-6 grid replay cleanly") {
  // Regression: the greedy tuple compaction must not drop uncovered
  // tuples that sit ahead of the first covered one.
  auto inst = GridInstance::power_maps(torsion_grid(6), 3);
  auto res = select_covers(inst, 10'000);
  CHECK(res.stage_verified == std::vector<bool>{true, true, true});
  const Rat third(1, 3);
  for (const auto& x : {inst.grid[1], inst.grid[3], inst.grid[4]}) {
    bool witnessed = false;
    for (const Int& n : res.stage_sets[2]) {
      if (circle_dist(circle_pow(x, n), CirclePoint()) < third) witnessed = true;
    }
    CHECK(witnessed);
  }
}

TEST_CASE("filter base property on the cover") {
  auto inst = GridInstance::power_maps(torsion_grid(5), 3);
  auto res = select_covers(inst, 10'000);

  SUBCASE("singletons meet every stage") {
    for (std::size_t i = 0; i < res.grid_size; ++i) {
      auto rep = filter_base_check(res, {i}, 1, 3);
      CHECK(rep.holds);
      CHECK(rep.witnesses.size() == 3);
    }
  }

  SUBCASE("pairs meet stages from their length on") {
    for (std::size_t i = 0; i < res.grid_size; ++i) {
      for (std::size_t j = 0; j < res.grid_size; ++j) {
        auto rep = filter_base_check(res, {i, j}, 2, 3);
        CHECK(rep.holds);
      }
    }
  }

  SUBCASE("a pair of equal points reduces to the singleton case") {
    auto single = filter_base_check(res, {2}, 2, 3);
    auto pair = filter_base_check(res, {2, 2}, 2, 3);
    CHECK(single.holds);
    CHECK(pair.holds);
    CHECK(single.witnesses == pair.witnesses);
  }
}

TEST_CASE("membership in the G_ell families") {
  auto inst = GridInstance::power_maps(torsion_grid(4), 2);
  auto res = select_covers(inst, 1000);

  SUBCASE("a superset of some B-set is a member at ell = 1") {
    auto candidate = res.b_sets[0];
    auto rep = g_ell_membership(res, candidate, 1);
    CHECK(rep.member);
  }

  SUBCASE("the empty candidate is not a member") {
    auto rep = g_ell_membership(res, {}, 1);
    CHECK_FALSE(rep.member);
    CHECK_FALSE(g_ell_membership(res, {}, 2).member);
  }

  SUBCASE("membership is monotone in ell") {
    auto candidate = res.b_sets[1];
    if (g_ell_membership(res, candidate, 1).member) {
      CHECK(g_ell_membership(res, candidate, 2).member);  // pad with a repeated point
    }
  }
}

TEST_CASE("table-driven instances and horizon exhaustion") {
  // A single far-away function value: fine at tolerance 1, stuck at 1/2.
  std::map<Int, std::vector<CirclePoint>> table;
  table[0] = {CirclePoint(Rat(1, 2))};
  auto inst = GridInstance::from_table({CirclePoint(Rat(1, 3))}, table, {}, 2);

  try {
    select_covers(inst, 10);
    FAIL("expected horizon_exhausted_error");
  } catch (const horizon_exhausted_error& e) {
    CHECK(e.stage_k == 2);
    CHECK(e.witness_tuple == std::vector<std::size_t>{0, 0});
  }

  auto shallow = GridInstance::from_table({CirclePoint(Rat(1, 3))}, table, {}, 1);
  auto res = select_covers(shallow, 10);
  CHECK(res.stage_sets[0] == std::vector<Int>{0});
}

TEST_CASE("table validation") {
  std::map<Int, std::vector<CirclePoint>> bad;
  bad[0] = {CirclePoint(), CirclePoint()};
  CHECK_THROWS_AS(GridInstance::from_table({CirclePoint()}, bad, {}, 1), error);
}
