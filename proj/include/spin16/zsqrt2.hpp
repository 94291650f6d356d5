#pragma once

/**
 * @file zsqrt2.hpp
 * @brief Exact arithmetic in Z[sqrt2] and the normalized representations
 *        p = a^2 + b^2 = c^2 + 2d^2 = u^2 - 2v^2.
 *
 * Coordinates are 64-bit; every product goes through 128 bits and is
 * rejected with CapacityError if the result does not fit back.
 */

#include <ostream>

#include "spin16/arith.hpp"

namespace spin16 {

/// u + v*sqrt2.
struct RingElt {
  i64 u = 0;
  i64 v = 0;

  friend bool operator==(const RingElt&, const RingElt&) = default;
  friend auto operator<=>(const RingElt&, const RingElt&) = default;
};

std::ostream& operator<<(std::ostream& os, const RingElt& x);

inline constexpr RingElt kOne{1, 0};
inline constexpr RingElt kEps{1, 1};
inline constexpr RingElt kEps2{3, 2};
inline constexpr RingElt kEps2Inv{3, -2};

/// u^2 - 2v^2. CapacityError if it does not fit in 64 bits.
i64 norm(const RingElt& x);
RingElt conj(const RingElt& x);
bool is_totally_positive(const RingElt& x);
RingElt ring_mul(const RingElt& x, const RingElt& y);

/// x * eps^(2k), k of either sign.
RingElt apply_eps2(RingElt x, i64 k);

/// Representative of the eps^2-orbit of a totally positive x with
/// 1 <= x/conj(x) < eps^4, i.e. v >= 0 and 3v < 2u.
RingElt canonical_generator(RingElt x);

struct GaussRep {
  i64 a;  // odd, a = 1 mod 4
  i64 b;  // even, >= 0
  friend bool operator==(const GaussRep&, const GaussRep&) = default;
};

struct TwoRep {
  i64 c;  // odd, c = 1 mod 4
  i64 d;  // >= 0
  friend bool operator==(const TwoRep&, const TwoRep&) = default;
};

struct PellRep {
  i64 u;  // > 0, u = 1 mod 4
  i64 v;  // > 0
  RingElt elt() const { return {u, v}; }
  friend bool operator==(const PellRep&, const PellRep&) = default;
};

/// h + g*sqrt2 = (u + v*sqrt2)(1 + sqrt2), so 2g^2 - h^2 = p.
struct GHPair {
  i64 g;
  i64 h;
  friend bool operator==(const GHPair&, const GHPair&) = default;
};

/// p = a^2 + b^2 by Cornacchia; NoRepresentationError unless p = 1 mod 4.
GaussRep two_squares(i64 p);

/// p = c^2 + 2d^2 by Cornacchia; NoRepresentationError unless -2 is a square mod p.
TwoRep one_two_rep(i64 p);

/// Totally positive generators of the two primes above a split p, each
/// canonicalized; first() generates (p, r - sqrt2) with r = sqrt_mod(2, p).
struct SplitGenerators {
  RingElt first;
  RingElt second;
};
SplitGenerators split_generators(i64 p);

/// p = u^2 - 2v^2: the first element with u = 1 mod 4 on the eps^2-orbit of
/// the smallest positive solution. NoRepresentationError unless p = +-1 mod 8.
PellRep pell_rep(i64 p);

GHPair gh_from_pell(const PellRep& r);

/// All six congruences a=1 (8), b=0 (8), c=1 (8), d=0 (4), u=1 (8), v=0 (4).
bool z2_conditions(i64 p);

}  // namespace spin16
