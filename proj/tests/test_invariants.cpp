#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "spin16/errors.hpp"
#include "spin16/invariants.hpp"

using namespace spin16;

TEST_SUITE("invariants") {

TEST_CASE("p = 113 by hand") {
  const SplitInputs in = gather_split_inputs(113);
  CHECK(in.ab == GaussRep{-7, 8});
  CHECK(in.cd == TwoRep{9, 4});
  CHECK(in.uv == PellRep{41, 28});
  CHECK(in.gh == GHPair{69, 97});
  CHECK(in.h_neg_p % 8 == 0);
  CHECK(in.h_neg_2p % 8 == 0);

  const AlphaRoutes a = alpha_two_routes(in);
  CHECK(a.class_number == a.quartic);
  CHECK(a.class_number == ((in.h_neg_2p / 8) % 2 == 0 ? 1 : -1));

  const BetaRoutes b = beta_three_routes(in);
  CHECK(b.spin_formula == -1);  // (-1)^7 (-1)^7 (28/41)
  CHECK(b.class_number == -1);
  REQUIRE(b.spin_average);
  CHECK(*b.spin_average == -1);
  CHECK(b.value == -1);
  // (a - 1 + b + 2d)/8 = 1, so beta = (-1)^(1 + (h(-p) + h(-2p))/8).
  CHECK((in.ab.a - 1 + in.ab.b + 2 * in.cd.d) / 8 == 1);
  CHECK(b.class_number == (((1 + (in.h_neg_p + in.h_neg_2p) / 8) % 2 == 0) ? 1 : -1));

  CHECK(jacobi(41, 113) == 1);
  CHECK(jacobi(2 * 97, 69) == 1);
  CHECK(last_factor_identity(41, 28));
  CHECK(first_factor_check(in));
  CHECK((in.ab.b + 2 * in.cd.d) == 16);

  const Verdicts lw = lw_identity_suite(in);
  for (const char* name : {"lw.crit8rank1.u_over_p", "lw.crit8rank1.m2_over_u", "lw.crit8rank1.g_over_p",
                           "lw.crit8rank1.m1_over_g", "lw.congruences", "lw.middle_factor", "lw.A", "lw.B",
                           "lw.overZ", "lw.last_factor"}) {
    CAPTURE(name);
    REQUIRE(lw.count(name) == 1);
    CHECK(lw.at(name));
  }
}

TEST_CASE("non-split-complete inputs are rejected") {
  CHECK_THROWS_AS(alpha_two_routes(17), DomainError);
  CHECK_THROWS_AS(beta_three_routes(97), DomainError);
  CHECK_THROWS_AS(kw_classify(17, {1, 1}, 4, 2), DomainError);
  CHECK_THROWS_AS(gather_split_inputs(7), DomainError);
  CHECK_THROWS_AS(lw_identity_suite(17), DomainError);  // 8 does not divide h(-17)
  CHECK_THROWS_AS(last_factor_identity(5, 4), DomainError);
  CHECK_THROWS_AS(last_factor_identity(17, 34), DomainError);
}

TEST_CASE("last-factor identity on random coprime pairs") {
  int done = 0;
  while (done < 10'000) {
    const i64 u = 8 * oracle::uniform(0, 1'000'000) + 1;
    const i64 v = 4 * oracle::uniform(1, 1'000'000);
    if (std::gcd(u, v) != 1) continue;
    CAPTURE(u);
    CAPTURE(v);
    // Independent evaluation with the factorization-based Jacobi symbol.
    const int lhs = oracle::jacobi_factor(2 * (u + 2 * v), u + v);
    const int rhs = ((v / 4) % 2 == 0 ? 1 : -1) * oracle::jacobi_factor(v, u);
    REQUIRE(lhs == rhs);
    REQUIRE(last_factor_identity(u, v));
    ++done;
  }
}

TEST_CASE("hasse index") {
  CHECK(hasse_index(pell_invariant(5).e) == 1);
  CHECK(hasse_index(pell_invariant(17).e) == 2);
  CHECK(hasse_index(pell_invariant(3).e) == 2);
  CHECK_THROWS_AS(hasse_index(1), DomainError);
}

TEST_CASE("kw_classify predictions") {
  const KwPrediction k = kw_classify(113, {-1, -1}, 8, -1);
  CHECK(k.predicted_hplus_mod16 == 8);
  REQUIRE(k.predicted_e);
  CHECK(*k.predicted_e == -1);
  CHECK_THROWS_AS(kw_classify(113, {1, 1}, 8, -1), IdentityViolation);
  CHECK_THROWS_AS(kw_classify(113, {-1, -1}, 8, 2), IdentityViolation);
  try {
    kw_classify(113, {1, -1}, 8, -1);
    FAIL("expected a violation");
  } catch (const IdentityViolation& e) {
    CHECK(e.prime() == 113);
    CHECK(e.identity() == "kw.cell_prediction");
  }
}

TEST_CASE("build_record shapes") {
  const FactorTable table(1000);
  const PrimeRecord two = build_record(2, table);
  CHECK_FALSE(two.e);
  CHECK(two.verdicts.empty());

  const PrimeRecord r3 = build_record(3, table);
  CHECK_FALSE(r3.ab);
  CHECK(r3.cd == TwoRep{1, 1});
  CHECK_FALSE(r3.uv);
  CHECK(r3.e == -2);
  CHECK(r3.hasse_q == 2);
  CHECK_FALSE(r3.alpha);

  const PrimeRecord r7 = build_record(7, table);
  CHECK(r7.uv == PellRep{13, 9});
  CHECK_FALSE(r7.h_neg_p);

  RecordOptions opts;
  opts.classnum_audit = true;
  opts.pell_witness = true;
  const PrimeRecord r = build_record(113, table, opts);
  CHECK(r.split_complete);
  CHECK(r.beta == -1);
  CHECK(r.cell->alpha == *r.alpha);
  CHECK(r.cell->str().size() == 2);
  CHECK(r.h_plus_2p == 8);
  CHECK(r.witness);
  CHECK(r.verdicts.at("classnum.audit"));
  for (const auto& [name, ok] : r.verdicts) {
    CAPTURE(name);
    CHECK(ok);
  }
  CHECK_THROWS_AS(build_record(9, table), DomainError);
  CHECK_THROWS_AS(build_record(1009, table), CapacityError);
}

TEST_CASE("records up to 3*10^4: alpha/beta iff split complete, all verdicts pass") {
  const i64 bound = 30'000;
  const FactorTable table(2 * bound);
  for (i64 p : sieve_primes(bound)) {
    if (p == 2) continue;
    RecordOptions opts;
    opts.classnum_audit = p % 8 == 1 && p < 5000;
    const PrimeRecord r = build_record(p, table, opts);
    CAPTURE(p);
    REQUIRE(r.alpha.has_value() == r.split_complete);
    REQUIRE(r.beta.has_value() == r.split_complete);
    REQUIRE(r.cell.has_value() == r.split_complete);
    REQUIRE((r.hasse_q == 1) == (r.e == -1));
    for (const auto& [name, ok] : r.verdicts) REQUIRE(ok);
    if (r.split_complete) {
      REQUIRE(r.verdicts.count("kw.cell_prediction"));
      REQUIRE(r.verdicts.count("beta.routes_1_3"));
    }
  }
}

}  // TEST_SUITE
