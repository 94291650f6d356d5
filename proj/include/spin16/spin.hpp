#pragma once

/**
 * @file spin.hpp
 * @brief Spin symbols over Z[sqrt2] and the ideal-indexed sequence b_n(chi, psi).
 *
 * For an odd totally positive alpha = u + v*sqrt2 the bracket is [alpha] = (v/u).
 * With v even and chi a character mod 8, [alpha]_chi = i^(v/2) chi(u) (v/u).
 * For an ideal n = (alpha) with N(n) = 1 mod 8,
 *
 *   b_n(chi, psi) = 1/2 psi(N n) i^((N n - 1)/8) sum_{k=0..3} [eps^(2k) alpha]_chi,
 *
 * and b_n = 0 otherwise. Ideals are indexed by the canonical generator with
 * 1 <= alpha/conj(alpha) < eps^4 (see canonical_generator).
 */

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spin16/arith.hpp"
#include "spin16/zsqrt2.hpp"

namespace spin16 {

/// Exact Gaussian integer.
struct Gauss {
  i64 re = 0;
  i64 im = 0;

  friend Gauss operator+(Gauss x, Gauss y) { return {x.re + y.re, x.im + y.im}; }
  friend Gauss operator*(Gauss x, Gauss y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  Gauss& operator+=(Gauss y) { return *this = *this + y; }
  friend bool operator==(const Gauss&, const Gauss&) = default;
};

/// i^k for any integer k.
Gauss i_pow(i64 k);

/// Dirichlet character as an explicit table on residues; non-coprime residues map to 0.
struct CharacterTable {
  int modulus = 1;
  std::array<Gauss, 16> values{};

  Gauss operator()(i64 n) const { return values[static_cast<std::size_t>(mod_floor(n, modulus))]; }
  std::string label() const;
};

/// The four characters mod 8 ordered by (chi(3), chi(7)) with +1 before -1;
/// index 0 is trivial.
const std::array<CharacterTable, 4>& characters_mod8();

/// The eight characters mod 16 from (Z/16)* = <3> x <15>, ordered by
/// psi(3) = i^j (j = 0..3) then psi(15) = +1, -1; index 0 is trivial.
const std::array<CharacterTable, 8>& characters_mod16();

/// b_n(chi, psi) = (re2 + im2*i) / 2.
struct SpinValue {
  i64 re2 = 0;
  i64 im2 = 0;
  friend bool operator==(const SpinValue&, const SpinValue&) = default;
};

std::string to_string(const SpinValue& s);

/// An odd ideal, via its canonical totally positive generator.
struct IdealRep {
  RingElt gen;

  static IdealRep from_generator(const RingElt& any_totally_positive) {
    return IdealRep{canonical_generator(any_totally_positive)};
  }
  i64 norm() const { return spin16::norm(gen); }
  friend bool operator==(const IdealRep&, const IdealRep&) = default;
};

/// [x] = (v/u) for odd totally positive x.
int bracket(const RingElt& x);

/// [x]_chi = i^(v/2) chi(u) (v/u); requires v even.
Gauss bracket_chi(const RingElt& x, const CharacterTable& chi);

/// b_n computed from the orbit of the given totally positive generator.
SpinValue spin_b_from_seed(const RingElt& seed, const CharacterTable& chi, const CharacterTable& psi);

SpinValue spin_b(const IdealRep& n, const CharacterTable& chi, const CharacterTable& psi);

/// Every odd ideal of norm <= X exactly once, through its canonical generator.
/// Visit order: increasing u, then increasing v.
void for_each_ideal(i64 bound, const std::function<void(const IdealRep&)>& visit);
std::vector<IdealRep> enumerate_ideals(i64 bound);

/// Prime ideals above an odd prime: two conjugates if p = +-1 mod 8, else (p).
std::vector<IdealRep> prime_ideals_above(i64 p);

/// (1/32) sum over all chi mod 8, psi mod 16 of b_p(chi, psi) for a prime ideal
/// above a split p. DomainError if p is inert.
int recover_beta(const IdealRep& prime_ideal);
int recover_beta(i64 p);

/// A split-complete prime with its alpha_p and beta_p, supplied by the caller.
struct SignedPrime {
  i64 p;
  int alpha;
  int beta;
};

struct PartialSumRow {
  i64 x;
  i64 prime_ideals;       // number of prime ideals with norm <= x
  Gauss spin_sum_doubled; // 2 * sum of b_p(chi, psi)
  i64 split_complete;     // number of split-complete p <= x among the supplied primes
  i64 sum_alpha;
  i64 sum_beta;
  i64 sum_alpha_beta;
};

/// Exact running sums at the given ascending checkpoints. Prime ideals come from
/// the supplied prime list (which must reach the last checkpoint).
std::vector<PartialSumRow> partial_sums(const PrimeList& primes, std::span<const i64> checkpoints,
                                        const CharacterTable& chi, const CharacterTable& psi,
                                        std::span<const SignedPrime> signed_primes);

}  // namespace spin16
