#include "powerseq/measure.hpp"

#include <doctest.h>

#include <random>

using namespace powerseq;

namespace {

IntervalUnion random_union(std::mt19937& rng) {
  std::uniform_int_distribution<int> count(1, 4), den(5, 40);
  std::vector<IntervalUnion::Part> parts;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    int q = den(rng);
    std::uniform_int_distribution<int> num(0, q - 2);
    int a = num(rng);
    std::uniform_int_distribution<int> width(1, q - a - 1);
    parts.emplace_back(Rat(a, q), Rat(a + width(rng), q));
  }
  return IntervalUnion::of(std::move(parts));
}

}  // namespace

TEST_CASE("near_one_preimage geometry") {
  auto full_turn = near_one_preimage(1, Rat(1, 4));
  CHECK(full_turn.measure() == Rat(1, 2));
  REQUIRE(full_turn.size() == 2);  // wraparound pair around 0
  CHECK(full_turn.parts()[0] == IntervalUnion::Part{Rat(0), Rat(1, 4)});
  CHECK(full_turn.parts()[1] == IntervalUnion::Part{Rat(3, 4), Rat(1)});

  CHECK(near_one_preimage(2, Rat(1, 8)).measure() == Rat(1, 4));
  CHECK(near_one_preimage(3, Rat(1, 10)).measure() == Rat(1, 5));

  std::mt19937 rng(11);
  for (int i = 0; i < 60; ++i) {
    std::uniform_int_distribution<int> ns(1, 50), dens(3, 99);
    int q = dens(rng);
    std::uniform_int_distribution<int> nums(1, (q - 1) / 2);
    Rat eps(nums(rng), q);  // eps < 1/2
    Int n = ns(rng);
    CHECK(near_one_preimage(n, eps).measure() == 2 * eps);
  }

  CHECK_THROWS_AS(near_one_preimage(0, Rat(1, 4)), error);
  CHECK_THROWS_AS(near_one_preimage(3, Rat(2, 3)), error);
}

TEST_CASE("interval union algebra") {
  auto a = IntervalUnion::of({{Rat(0), Rat(1, 2)}});
  auto b = IntervalUnion::of({{Rat(1, 4), Rat(3, 4)}});
  auto meet = intersect(a, b);
  REQUIRE(meet.size() == 1);
  CHECK(meet.parts()[0] == IntervalUnion::Part{Rat(1, 4), Rat(1, 2)});
  CHECK(meet.measure() == Rat(1, 4));

  CHECK(intersect(IntervalUnion::full(), b) == b);
  CHECK(intersect(IntervalUnion::empty(), b).is_empty());

  std::mt19937 rng(12);
  for (int i = 0; i < 120; ++i) {
    auto x = random_union(rng);
    auto y = random_union(rng);
    // inclusion-exclusion on exact measures
    CHECK(intersect(x, y).measure() + unite(x, y).measure() == x.measure() + y.measure());
    CHECK(intersect(x, y).measure() <= std::min(x.measure(), y.measure()));
    // translation invariance
    std::uniform_int_distribution<int> num(1, 30);
    Rat shift(num(rng), 31);
    CHECK(x.translated(shift).measure() == x.measure());
  }
}

TEST_CASE("open membership skips boundary points") {
  auto u = IntervalUnion::of({{Rat(0), Rat(1, 4)}});
  CHECK(u.contains(Rat(1, 8)));
  CHECK_FALSE(u.contains(Rat(0)));
  CHECK_FALSE(u.contains(Rat(1, 4)));
  CHECK_FALSE(u.contains(Rat(1, 2)));
}

TEST_CASE("constraint-set measure evidence") {
  SUBCASE("single explicit constraint") {
    auto rep = c_set_approx(OmegaSet::explicit_set({Int(1)}), Rat(1, 4), 1);
    REQUIRE(rep.exact_sequence.size() == 1);
    CHECK(rep.exact_sequence[0] == Rat(1, 2));
  }

  SUBCASE("shifted factorials shrink strictly") {
    auto rep = c_set_approx(OmegaSet::factorial_shift(1), Rat(1, 10), 5);
    std::vector<Int> expected = {2, 3, 7, 25, 121};
    CHECK(rep.constraints == expected);
    REQUIRE(rep.exact_sequence.size() == 5);
    CHECK(rep.exact_sequence[0] == Rat(1, 5));  // one constraint: measure 2*eps
    for (std::size_t i = 1; i < 5; ++i)
      CHECK(rep.exact_sequence[i] <= rep.exact_sequence[i - 1]);
    CHECK(rep.exact_sequence[4] < Rat(1, 5));
    CHECK_FALSE(rep.truncated);
  }

  SUBCASE("the vacuous zero constraint is skipped") {
    auto rep = c_set_approx(OmegaSet::multiples(2), Rat(1, 8), 2);
    std::vector<Int> expected = {2, 4};
    CHECK(rep.constraints == expected);
  }

  SUBCASE("fine grid oracle for the even-multiples prefix") {
    auto rep = c_set_approx(OmegaSet::multiples(2), Rat(1, 8), 2);
    const long grid = 40'000;
    long hits = 0;
    for (long i = 0; i < grid; ++i) {
      Rat theta(i, grid);
      CirclePoint x(theta);
      bool in = circle_dist(circle_pow(x, 2), CirclePoint()) < Rat(1, 8) &&
                circle_dist(circle_pow(x, 4), CirclePoint()) < Rat(1, 8);
      if (in) ++hits;
    }
    Rat grid_estimate(hits, grid);
    CHECK(abs(grid_estimate - rep.exact_sequence.back()) < Rat(1, 1000));
  }

  SUBCASE("interval budget yields a partial report") {
    auto rep = c_set_approx(OmegaSet::factorial_shift(1), Rat(1, 10), 5, 1);
    CHECK(rep.truncated);
    CHECK(rep.exact_sequence.size() == 1);  // achieved depth
    CHECK(rep.constraints.size() == rep.exact_sequence.size());
    CHECK(rep.exact_sequence[0] == Rat(1, 5));
  }

  SUBCASE("monotone in depth and in eps") {
    auto d3 = c_set_approx(OmegaSet::factorial_shift(1), Rat(1, 10), 3);
    auto d5 = c_set_approx(OmegaSet::factorial_shift(1), Rat(1, 10), 5);
    CHECK(d5.exact_sequence[2] == d3.exact_sequence[2]);
    CHECK(d5.exact_sequence.back() <= d3.exact_sequence.back());
    auto tight = c_set_approx(OmegaSet::factorial_shift(1), Rat(1, 20), 4);
    auto loose = c_set_approx(OmegaSet::factorial_shift(1), Rat(1, 10), 4);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(tight.exact_sequence[i] <= loose.exact_sequence[i]);
  }
}

TEST_CASE("Monte Carlo engine") {
  SUBCASE("matches an exact interval measure within 4 sigma") {
    auto target = near_one_preimage(3, Rat(1, 10));  // measure 1/5
    auto mc = mc_haar_circle([&](const CirclePoint& x) { return target.contains(x.angle()); },
                             100'000, 7);
    CHECK(std::abs(mc.estimate - 0.2) <= 4 * mc.stderr_estimate);
  }

  SUBCASE("O(2) coset split is even") {
    auto mc = mc_haar_orth([](const OrthElement& g) { return g.flip; }, 100'000, 7);
    CHECK(std::abs(mc.estimate - 0.5) <= 4 * mc.stderr_estimate);
  }

  SUBCASE("deterministic given the seed, independent of threading") {
    auto target = near_one_preimage(5, Rat(1, 12));
    auto pred = [&](const CirclePoint& x) { return target.contains(x.angle()); };
    auto a = mc_haar_circle(pred, 20'000, 99, 1);
    auto b = mc_haar_circle(pred, 20'000, 99, 1);
    auto c = mc_haar_circle(pred, 20'000, 99, 4);
    CHECK(a.hits == b.hits);
    CHECK(a.hits == c.hits);
    auto other = mc_haar_circle(pred, 20'000, 100, 1);
    CHECK(a.hits != other.hits);  // seed actually matters
  }

  SUBCASE("torus sampling dimensions") {
    auto mc = mc_haar_torus(2, [](const TorusPoint& p) {
      return p.coords[0].angle() < Rat(1, 2) && p.coords[1].angle() < Rat(1, 2);
    }, 50'000, 7);
    CHECK(std::abs(mc.estimate - 0.25) <= 4 * mc.stderr_estimate);
  }

  SUBCASE("cross-check attaches and stays within 4 sigma") {
    auto rep = c_set_approx(OmegaSet::factorial_shift(1), Rat(1, 10), 5);
    attach_mc_cross_check(rep, 100'000, 7);
    REQUIRE(rep.mc);
    CHECK(rep.mc_within_4sigma);
  }
}
