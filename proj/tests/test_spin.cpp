#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <numeric>

#include "oracles.hpp"
#include "spin16/errors.hpp"
#include "spin16/invariants.hpp"
#include "spin16/spin.hpp"

using namespace spin16;

namespace {

constexpr Gauss kI{0, 1};

RingElt random_ideal_generator() {
  for (;;) {
    const i64 u = 2 * oracle::uniform(0, 3000) + 1;
    const i64 v = oracle::uniform(0, std::max<i64>(0, (2 * u - 1) / 3));
    if (3 * v < 2 * u) return {u, v};
  }
}

// Number of ideals of norm n in Z[sqrt2]: sum over d | n of (2/d).
i64 ideal_count(i64 n) {
  i64 total = 0;
  for (i64 d = 1; d <= n; ++d)
    if (n % d == 0) total += oracle::kronecker_naive(8, d);
  return total;
}

}  // namespace

TEST_SUITE("spin") {

TEST_CASE("character tables are multiplicative and complete") {
  const auto& c8 = characters_mod8();
  const auto& c16 = characters_mod16();
  auto check_table = [](const CharacterTable& chi, int m) {
    CHECK(chi.modulus == m);
    CHECK(chi(1) == Gauss{1, 0});
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) REQUIRE(chi(a * b) == chi(a) * chi(b));
    for (int a = 0; a < m; a += 2) REQUIRE(chi(a) == Gauss{});
  };
  for (const auto& chi : c8) {
    check_table(chi, 8);
    for (int a = 1; a < 8; a += 2) CHECK(chi(a).im == 0);
  }
  for (const auto& psi : c16) check_table(psi, 16);

  // Trivial first; all distinct; orthogonality sum_a chi(a) = 0 for nontrivial chi.
  CHECK(c8[0](3) == Gauss{1, 0});
  CHECK(c8[0](7) == Gauss{1, 0});
  CHECK(c16[0](3) == Gauss{1, 0});
  CHECK(c16[0](15) == Gauss{1, 0});
  for (std::size_t i = 1; i < c16.size(); ++i) {
    Gauss s{};
    for (int a = 0; a < 16; ++a) s += c16[i](a);
    CHECK(s == Gauss{});
  }
  for (std::size_t i = 0; i < c8.size(); ++i)
    for (std::size_t j = i + 1; j < c8.size(); ++j) CHECK(c8[i].values != c8[j].values);
  for (std::size_t i = 0; i < c16.size(); ++i)
    for (std::size_t j = i + 1; j < c16.size(); ++j) CHECK(c16[i].values != c16[j].values);
  // psi(3) runs through 1, i, -1, -i.
  CHECK(c16[2](3) == kI);
  CHECK(c16[4](3) == Gauss{-1, 0});
  CHECK(c16[1](15) == Gauss{-1, 0});
}

TEST_CASE("brackets") {
  CHECK(bracket({1, 0}) == 1);
  CHECK(bracket({3, 2}) == -1);
  CHECK(bracket({17, 12}) == -1);
  CHECK_THROWS_AS(bracket({1, 1}), DomainError);
  CHECK_THROWS_AS(bracket({4, 1}), DomainError);

  const CharacterTable& chi0 = characters_mod8()[0];
  for (const auto& chi : characters_mod8()) CHECK(bracket_chi({1, 0}, chi) == Gauss{1, 0});
  CHECK(bracket_chi({3, 2}, chi0) == Gauss{0, -1});
  CHECK(bracket_chi({17, 12}, chi0) == Gauss{1, 0});
  CHECK_THROWS_AS(bracket_chi({3, 1}, chi0), DomainError);
}

TEST_CASE("spin_b examples") {
  const auto& chi0 = characters_mod8()[0];
  const auto& psi0 = characters_mod16()[0];
  CHECK(spin_b(IdealRep{{1, 0}}, chi0, psi0) == SpinValue{2, -2});
  CHECK(to_string(spin_b(IdealRep{{1, 0}}, chi0, psi0)) == "(2-2i)/2");
  CHECK(spin_b_from_seed({3, 2}, chi0, psi0) == SpinValue{2, -2});
  CHECK(apply_eps2(kOne, 3) == RingElt{99, 70});
  // N = 3 mod 8 or even norm: zero.
  for (const auto& chi : characters_mod8())
    for (const auto& psi : characters_mod16()) {
      CHECK(spin_b(IdealRep{{5, 1}}, chi, psi) == SpinValue{});   // N = 23 = 7 mod 8
      CHECK(spin_b(IdealRep{{1, 0}}, chi, psi) != SpinValue{});
      // (3) and (11): N = 1 mod 8, but 3 (resp. 11) divides u and v all along the orbit.
      CHECK(spin_b(IdealRep{{3, 0}}, chi, psi) == SpinValue{});
      CHECK(spin_b(IdealRep{{11, 0}}, chi, psi) == SpinValue{});
      CHECK(spin_b(IdealRep{{2, 1}}, chi, psi) == SpinValue{});   // N = 2
    }
  CHECK_THROWS_AS(spin_b_from_seed({1, 1}, chi0, psi0), DomainError);
}

TEST_CASE("spin values stay in the half-Gaussian box") {
  for (const IdealRep& n : enumerate_ideals(5000))
    for (const auto& chi : characters_mod8())
      for (const auto& psi : characters_mod16()) {
        const SpinValue b = spin_b(n, chi, psi);
        REQUIRE(b.re2 * b.re2 + b.im2 * b.im2 <= 16);
        if (mod_floor(n.norm(), 8) != 1) REQUIRE(b == SpinValue{});
      }
}

TEST_CASE("eps^8 invariance of the bracket") {
  int done = 0;
  while (done < 10'000) {
    const RingElt x{2 * oracle::uniform(0, 100'000) + 1, oracle::uniform(-70'000, 70'000)};
    if (!is_totally_positive(x)) continue;
    const RingElt y = apply_eps2(x, 4);
    CAPTURE(x);
    REQUIRE(bracket(y) == bracket(x));
    if (x.v % 2 == 0)
      for (const auto& chi : characters_mod8()) REQUIRE(bracket_chi(y, chi) == bracket_chi(x, chi));
    ++done;
  }
}

TEST_CASE("spin_b does not depend on the orbit seed") {
  for (int t = 0; t < 1000; ++t) {
    const RingElt g = random_ideal_generator();
    const IdealRep n{g};
    for (const auto& chi : characters_mod8())
      for (const auto& psi : characters_mod16()) {
        const SpinValue want = spin_b(n, chi, psi);
        for (i64 k : {-2, -1, 1, 2, 3}) {
          CAPTURE(g);
          CAPTURE(k);
          REQUIRE(spin_b_from_seed(apply_eps2(g, k), chi, psi) == want);
        }
      }
  }
}

TEST_CASE("eps^4 invariance of the beta kernel (-1)^(v/4) (v/u)") {
  auto kernel = [](const RingElt& x) { return ((x.v / 4) % 2 == 0 ? 1 : -1) * jacobi(x.v, x.u); };
  CHECK(kernel({17, 12}) == 1);
  CHECK(kernel({577, 408}) == 1);
  const RingElt eps4{17, 12};
  int done = 0;
  while (done < 10'000) {
    const RingElt x{8 * oracle::uniform(0, 20'000) + 1, 4 * oracle::uniform(-10'000, 10'000)};
    if (!is_totally_positive(x) || std::gcd(x.u, x.v) != 1) continue;
    const RingElt y = ring_mul(eps4, x);
    CAPTURE(x);
    REQUIRE(mod_floor(y.u, 8) == 1);
    REQUIRE(y.v % 4 == 0);
    REQUIRE(kernel(y) == kernel(x));
    ++done;
  }
}

TEST_CASE("enumerate_ideals examples") {
  const auto one = enumerate_ideals(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].gen == RingElt{1, 0});

  std::multiset<i64> norms7;
  for (const auto& n : enumerate_ideals(7)) norms7.insert(n.norm());
  CHECK(norms7 == std::multiset<i64>{1, 7, 7});

  int norm17 = 0;
  for (const auto& n : enumerate_ideals(17))
    if (n.norm() == 17) {
      ++norm17;
      CHECK((n == IdealRep::from_generator({5, 2}) || n == IdealRep::from_generator({5, -2})));
    }
  CHECK(norm17 == 2);
  CHECK_THROWS_AS(enumerate_ideals(0), DomainError);
}

TEST_CASE("enumerate_ideals matches the ideal-counting function and is duplicate-free") {
  const i64 bound = 3000;
  std::map<i64, i64> by_norm;
  std::set<RingElt> seen;
  for (const auto& n : enumerate_ideals(bound)) {
    REQUIRE(n.gen == canonical_generator(n.gen));
    REQUIRE(seen.insert(n.gen).second);
    ++by_norm[n.norm()];
  }
  for (i64 m = 1; m <= bound; m += 2) {
    CAPTURE(m);
    REQUIRE(by_norm[m] == ideal_count(m));
  }
}

TEST_CASE("prime ideals above p") {
  CHECK(prime_ideals_above(7).size() == 2);
  CHECK(prime_ideals_above(17).size() == 2);
  CHECK(prime_ideals_above(5).size() == 1);
  CHECK(prime_ideals_above(5)[0].norm() == 25);
  for (const auto& n : prime_ideals_above(113)) CHECK(n.norm() == 113);
  CHECK_THROWS_AS(prime_ideals_above(2), DomainError);
}

TEST_CASE("recover_beta examples") {
  CHECK(recover_beta(7) == 0);
  CHECK(recover_beta(97) == 0);
  CHECK(recover_beta(113) == -1);
  CHECK_THROWS_AS(recover_beta(5), DomainError);
  CHECK_THROWS_AS(recover_beta(IdealRep{{5, 0}}), DomainError);
}

TEST_CASE("recover_beta: conjugate symmetry and agreement with the class-number route") {
  for (i64 p : sieve_primes(30'000)) {
    if (p % 8 != 1 && p % 8 != 7) continue;
    const auto ideals = prime_ideals_above(p);
    const int b0 = recover_beta(ideals[0]);
    CAPTURE(p);
    REQUIRE(recover_beta(ideals[1]) == b0);
    if (p % 8 == 1 && is_split_complete(p)) {
      REQUIRE(b0 == beta_three_routes(gather_split_inputs(p), false).class_number);
    } else {
      REQUIRE(b0 == 0);
    }
  }
}

TEST_CASE("partial sums") {
  const PrimeList primes = sieve_primes(20'000);
  const auto& chi = characters_mod8()[1];
  const auto& psi = characters_mod16()[3];

  const i64 small[] = {1, 2, 6};
  for (const auto& row : partial_sums(primes, small, chi, psi, {})) CHECK(row.spin_sum_doubled == Gauss{});

  CHECK(partial_sums(primes, std::span<const i64>{}, chi, psi, {}).empty());
  const i64 too_far[] = {30'000};
  CHECK_THROWS_AS(partial_sums(primes, too_far, chi, psi, {}), DomainError);

  // Against a direct sum over every prime ideal.
  const i64 cps[] = {100, 1000, 20'000};
  const auto rows = partial_sums(primes, cps, chi, psi, {});
  for (std::size_t k = 0; k < 3; ++k) {
    Gauss s{};
    i64 count = 0;
    for (const IdealRep& n : enumerate_ideals(cps[k])) {
      const i64 m = n.norm();
      const auto pm = oracle::is_prime_trial(m);
      const i64 r = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(m))));
      if (!pm && !(r * r == m && oracle::is_prime_trial(r) && (r % 8 == 3 || r % 8 == 5))) continue;
      const SpinValue b = spin_b(n, chi, psi);
      s += Gauss{b.re2, b.im2};
      ++count;
    }
    CAPTURE(cps[k]);
    CHECK(rows[k].spin_sum_doubled == s);
    CHECK(rows[k].prime_ideals == count + 1);  // + the ramified ideal above 2
    CHECK(rows[k].spin_sum_doubled.re * rows[k].spin_sum_doubled.re +
              rows[k].spin_sum_doubled.im * rows[k].spin_sum_doubled.im <=
          16 * rows[k].prime_ideals * rows[k].prime_ideals);
  }

  const SignedPrime sp[] = {{113, -1, -1}, {257, 1, -1}, {10'009, 1, 1}};
  const auto with_signs = partial_sums(primes, cps, chi, psi, sp);
  CHECK(with_signs[0].split_complete == 0);
  CHECK(with_signs[1].split_complete == 2);
  CHECK(with_signs[1].sum_alpha == 0);
  CHECK(with_signs[1].sum_beta == -2);
  CHECK(with_signs[1].sum_alpha_beta == 0);
  CHECK(with_signs[2].sum_alpha_beta == 1);
}

}  // TEST_SUITE
