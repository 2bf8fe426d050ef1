#include "powerseq/convergence.hpp"

#include <doctest.h>

using namespace powerseq;

TEST_CASE("convergence along factorials and shifted factorials") {
  OmegaSet factorials = OmegaSet::factorial();
  OmegaSet shifted = OmegaSet::factorial_shift(1);

  auto v = in_C_B(CirclePoint(Rat(1, 6)), factorials);
  CHECK(v.converges_exact());

  auto d = in_C_B(CirclePoint(Rat(1, 5)), shifted);
  REQUIRE(d.diverges_exact());
  CHECK(d.modulus == 5);
  // the certificate's witness exponent is re-checkable by direct evaluation
  REQUIRE(d.witness_exponent);
  CHECK(circle_dist(circle_pow(CirclePoint(Rat(1, 5)), *d.witness_exponent), CirclePoint()) >=
        Rat(1, 5));

  CHECK(in_C_B(CirclePoint(), shifted).converges_exact());
  CHECK(in_C_B(CirclePoint(), factorials).converges_exact());
}

TEST_CASE("empirical tails") {
  OmegaSet factorials = OmegaSet::factorial();
  // 7 divides k! from 7! on; window indices 7.. start at 8!
  CHECK(empirical_tail(CirclePoint(Rat(1, 7)), factorials, 7, 12) == 0);
  CHECK(empirical_tail(CirclePoint(Rat(1, 7)), factorials, 0, 3) > 0);
  CHECK(empirical_tail(CirclePoint(), OmegaSet::powers(2), 0, 10) == 0);
  CHECK_THROWS_AS(empirical_tail(CirclePoint(), factorials, 3, 3), error);
}

TEST_CASE("O(2) convergence along even exponents") {
  OmegaSet evens = OmegaSet::multiples(2);
  CHECK(in_C_B_orth(OrthElement{CirclePoint(Rat(1, 7)), true}, evens).converges_exact());
  CHECK(in_C_B_orth(OrthElement{CirclePoint(Rat(1, 2)), false}, evens).converges_exact());
  auto d = in_C_B_orth(OrthElement{CirclePoint(Rat(1, 3)), false}, evens);
  REQUIRE(d.diverges_exact());
  CHECK(d.modulus == 3);
  // reflections diverge along sets with infinitely many odd elements
  auto odd = in_C_B_orth(OrthElement{CirclePoint(Rat(1, 4)), true}, OmegaSet::arithmetic(1, 2));
  REQUIRE(odd.diverges_exact());
  CHECK(odd.modulus == 2);
}

TEST_CASE("torus points converge componentwise") {
  OmegaSet sixes = OmegaSet::multiples(6);
  TorusPoint good{{CirclePoint(Rat(1, 2)), CirclePoint(Rat(1, 3))}};
  CHECK(in_C_B_torus(good, sixes).converges_exact());
  TorusPoint bad{{CirclePoint(Rat(1, 2)), CirclePoint(Rat(1, 5))}};
  auto v = in_C_B_torus(bad, sixes);
  REQUIRE(v.diverges_exact());
  CHECK(v.modulus == 5);
}

TEST_CASE("membership in the union over a filter") {
  SUBCASE("the nice filter keeps only the identity among torsion points") {
    auto f = FilterSpec::nice_f();
    auto id = in_D_F(CirclePoint(), f);
    CHECK(id.converges_exact());
    REQUIRE(id.witness);
    CHECK(id.witness->structurally_equal(OmegaSet::factorial_shift(1)));

    auto fifth = in_D_F(CirclePoint(Rat(1, 5)), f);
    REQUIRE(fifth.diverges_exact());
    CHECK(fifth.modulus == 5);

    auto half = in_D_F(CirclePoint(Rat(1, 2)), f);
    CHECK(half.diverges_exact());
  }

  SUBCASE("principal filters reduce to the generating set") {
    auto f = FilterSpec::principal(OmegaSet::multiples(6));
    auto v = in_D_F(CirclePoint(Rat(1, 3)), f);
    REQUIRE(v.converges_exact());
    REQUIRE(v.witness);
    CHECK(v.witness->structurally_equal(OmegaSet::multiples(6)));
    CHECK(in_D_F(CirclePoint(Rat(1, 4)), f).diverges_exact());
  }

  SUBCASE("generated filters search singles then the full intersection") {
    auto f = FilterSpec::generated_by({OmegaSet::multiples(4), OmegaSet::multiples(6)});
    // order 12 diverges along each generator alone but converges along
    // their intersection (the multiples of 12)
    auto v = in_D_F(CirclePoint(Rat(1, 12)), f);
    REQUIRE(v.converges_exact());
    REQUIRE(v.witness);
    CHECK(v.witness->kind() == SetKind::Intersection);
    auto w = in_D_F(CirclePoint(Rat(1, 5)), f);
    CHECK(w.diverges_exact());
    // an exhausted budget is reported honestly
    CHECK(in_D_F(CirclePoint(Rat(1, 12)), f, 1).status == ConvergenceVerdict::Status::Unknown);
  }

  SUBCASE("neighborhood family admits every torsion point with its own witness") {
    auto fam = FilterSpec::bohr_family();
    auto v = in_D_F(CirclePoint(Rat(3, 7)), fam);
    REQUIRE(v.converges_exact());
    REQUIRE(v.witness);
    CHECK(v.witness->structurally_equal(OmegaSet::multiples(7)));
  }

  SUBCASE("basic neighborhood filters reduce to their set") {
    auto f = FilterSpec::bohr_basic({CirclePoint(Rat(1, 3))}, Rat(1, 10));
    CHECK(in_D_F(CirclePoint(Rat(1, 3)), f).converges_exact());
    CHECK(in_D_F(CirclePoint(Rat(1, 7)), f).diverges_exact());
  }
}

TEST_CASE("undecidable profiles fall back to window evidence") {
  // (mult(6) U powers(5)) meets (mult(6) U powers(7)) is mult(6) plus {1},
  // but each side alone has an infinite non-divisible part, so no
  // closed-form rule sees through the combination.
  auto masked = OmegaSet::set_intersection(
      OmegaSet::set_union(OmegaSet::multiples(6), OmegaSet::powers(5)),
      OmegaSet::set_union(OmegaSet::multiples(6), OmegaSet::powers(7)));
  CHECK(masked.enumerate(4) == std::vector<Int>{0, 1, 6, 12});
  CHECK(divisibility_profile(masked, 6).count == DivisibilityProfile::Count::Unknown);

  auto conv = in_C_B(CirclePoint(Rat(1, 6)), masked);
  CHECK(conv.status == ConvergenceVerdict::Status::EmpiricalConverges);
  CHECK(conv.witness_distance == 0);

  auto div = in_C_B(CirclePoint(Rat(1, 4)), masked);
  REQUIRE(div.status == ConvergenceVerdict::Status::EmpiricalDiverges);
  REQUIRE(div.witness_exponent);
  CHECK(circle_dist(circle_pow(CirclePoint(Rat(1, 4)), *div.witness_exponent), CirclePoint()) ==
        div.witness_distance);
}

TEST_CASE("removing a finite set keeps an infinite exception profile") {
  auto pruned = OmegaSet::set_difference(OmegaSet::powers(2), OmegaSet::explicit_set({Int(4)}));
  auto p = divisibility_profile(pruned, 3);
  CHECK(p.infinite());
  CHECK(in_C_B(CirclePoint(Rat(1, 3)), pruned).diverges_exact());
}

TEST_CASE("lacunary counterexample structure") {
  auto rep = hadamard_counterexample_check(64);
  CHECK(rep.pass);
  CHECK(rep.orders_checked == 64);
  std::vector<Int> expected = {1, 2, 4, 8, 16, 32, 64};
  CHECK(rep.convergent_orders == expected);

  // order 3 diverges along C = {2^(2k)}: 3 never divides a power of two
  auto c_set = OmegaSet::strided(OmegaSet::powers(2), 0, 2);
  CHECK(in_C_B(CirclePoint(Rat(1, 3)), c_set).diverges_exact());
  CHECK(in_C_B(CirclePoint(), c_set).converges_exact());
}
