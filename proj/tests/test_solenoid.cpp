#include "powerseq/solenoid.hpp"

#include <doctest.h>

#include <random>

using namespace powerseq;

TEST_CASE("rational embeddings are coherent") {
  auto zero = embed_rational(Rat(0), 5);
  for (const auto& c : zero.levels) CHECK(c.is_identity());

  auto one = embed_rational(Rat(1), 3);
  REQUIRE(one.levels.size() == 4);
  CHECK(one.levels[0] == CirclePoint());
  CHECK(one.levels[1] == CirclePoint());
  CHECK(one.levels[2] == CirclePoint(Rat(1, 2)));
  CHECK(one.levels[3] == CirclePoint(Rat(1, 6)));

  auto half = embed_rational(Rat(1, 2), 2);
  CHECK(half.levels[0] == CirclePoint(Rat(1, 2)));
  CHECK(half.levels[1] == CirclePoint(Rat(1, 2)));
  CHECK(half.levels[2] == CirclePoint(Rat(1, 4)));

  std::mt19937 rng(21);
  std::uniform_int_distribution<int> num(0, 30), den(1, 24);
  for (int i = 0; i < 50; ++i) {
    auto z = embed_rational(Rat(num(rng), den(rng)), 8);
    CHECK(z.coherent());
  }
}

TEST_CASE("schedule for the tail of the factorials") {
  OmegaSet a_spec = OmegaSet::tail(OmegaSet::factorial(), 1);  // {2, 6, 24, ...}
  auto s = make_schedule(a_spec, 6);

  std::vector<Int> expected_a = {2, 6, 24, 120, 720, 5040, 40320};
  CHECK(s.a == expected_a);
  REQUIRE(s.eps.size() == 7);
  for (std::size_t j = 0; j <= 6; ++j) CHECK(s.eps[j] == Rat(1, j + 3));

  std::vector<unsigned> expected_gamma = {0, 1, 2, 2, 2, 2, 2};
  CHECK(s.gamma == expected_gamma);
  CHECK(s.start_offset == 0);

  // spot star inequality, re-derived by hand: (2/24) * 2! vs sqrt(1/3 * 1/4)
  Rat lhs = Rat(s.a[0], s.a[2]) * Rat(factorial(s.gamma[2]));
  CHECK(lhs * lhs <= s.eps[0] * s.eps[1]);

  // full independent replay of the product inequality by squaring
  for (std::size_t j = 0; j < 6; ++j) {
    for (std::size_t k = j + 1; k <= 6; ++k) {
      Rat left = Rat(s.a[j], s.a[k]) * Rat(factorial(s.gamma[k]));
      Rat rhs(1);
      for (std::size_t i = j; i < k; ++i) rhs *= s.eps[i];
      CHECK(left * left <= rhs);
    }
  }
}

TEST_CASE("schedule rejections") {
  CHECK_THROWS_AS(make_schedule(OmegaSet::powers(2), 4), not_thin_error);
  CHECK_THROWS_AS(make_schedule(OmegaSet::arithmetic(1, 3), 4), not_thin_error);
  // thin, but without the consecutive-factorial closed form for the sup
  CHECK_THROWS_AS(make_schedule(OmegaSet::strided(OmegaSet::factorial(), 0, 2), 4),
                  sup_not_computable_error);
  CHECK_THROWS_AS(
      make_schedule(OmegaSet::set_union(OmegaSet::factorial(), OmegaSet::powers(2)), 4),
      sup_not_computable_error);
}

TEST_CASE("two-limit build with certificate") {
  OmegaSet a_spec = OmegaSet::tail(OmegaSet::factorial(), 1);
  auto s = make_schedule(a_spec, 6);
  SolenoidElement v = embed_rational(Rat(1, 2), 4);
  SolenoidElement w = SolenoidElement::identity(4);
  std::vector<bool> mask = {true, false, true, false, true, false, true};
  auto [z, cert] = build(s, mask, v, w);

  CHECK(cert.all_ok);
  CHECK(cert.coherent_all_stages);
  CHECK(z.coherent());
  CHECK(z.levels.size() == 3);  // depth = max gamma = 2

  SUBCASE("every stage hits its target exactly at certified levels") {
    for (const auto& rec : cert.stage_records) {
      CHECK(rec.root_property);
      CHECK(rec.step_ok);
      CHECK(rec.step_distance <= rec.step_bound);
    }
  }

  SUBCASE("star checks and telescopes all pass") {
    CHECK(cert.star_checks.size() == 21);  // pairs j < k <= 6
    for (const auto& sc : cert.star_checks) CHECK(sc.ok);
    for (const auto& t : cert.telescopes) {
      CHECK(t.ok_chain);
      CHECK(t.ok_geometric);
      CHECK(t.scaled_distance <= t.chain_bound);
    }
  }

  SUBCASE("final distances sit under the shrinking bounds") {
    for (const auto& lr : cert.limit_records) CHECK(lr.ok);
    for (std::size_t j = 1; j < cert.limit_bounds.size(); ++j)
      CHECK(cert.limit_bounds[j] <= cert.limit_bounds[j - 1]);
    CHECK(cert.limit_bounds.back() < cert.limit_bounds.front());
  }

  SUBCASE("the last stage lands exactly on its target at level 0") {
    CHECK(circle_pow(z.levels[0], s.a[6]) == v.levels[0]);  // stage 6 aims at v
    // and the previous stage keeps the identity target within its bound
    Rat d = circle_dist(circle_pow(z.levels[0], s.a[5]), CirclePoint());
    CHECK(d <= cert.limit_bounds[5]);
    CHECK(d < Rat(1, 4));
  }
}

TEST_CASE("degenerate targets collapse to the identity") {
  auto s = make_schedule(OmegaSet::tail(OmegaSet::factorial(), 1), 4);
  SolenoidElement id = SolenoidElement::identity(4);
  std::vector<bool> mask(5, true);
  auto [z, cert] = build(s, mask, id, id);
  CHECK(cert.all_ok);
  for (const auto& c : z.levels) CHECK(c.is_identity());
}

TEST_CASE("build validates target depth") {
  auto s = make_schedule(OmegaSet::tail(OmegaSet::factorial(), 1), 6);  // max gamma = 2
  SolenoidElement shallow = embed_rational(Rat(1, 2), 1);
  SolenoidElement deep = SolenoidElement::identity(4);
  std::vector<bool> mask(7, true);
  CHECK_THROWS_AS(build(s, mask, shallow, deep), target_depth_error);
  CHECK_THROWS_AS(build(s, {true, false}, deep, deep), error);  // mask too short
}

TEST_CASE("sqrt upper bounds are tight and one-sided") {
  std::mt19937 rng(22);
  std::uniform_int_distribution<int> num(1, 50), den(51, 200);
  for (int i = 0; i < 60; ++i) {
    Rat x(num(rng), den(rng));
    Rat ub = sqrt_upper(x, Rat(1, 1'000'000));
    CHECK(ub * ub >= x);                          // one-sided
    CHECK((ub - Rat(1, 1'000'000)) * (ub - Rat(1, 1'000'000)) < x);  // tight
  }
}
