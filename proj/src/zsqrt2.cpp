#include "spin16/zsqrt2.hpp"

#include <limits>
#include <string>
#include <utility>

#include "spin16/errors.hpp"

namespace spin16 {

namespace {

i64 narrow(i128 x, const char* what) {
  if (x > std::numeric_limits<i64>::max() || x < std::numeric_limits<i64>::min())
    throw CapacityError(std::string(what) + ": result exceeds 64 bits");
  return static_cast<i64>(x);
}

// floor(n / d) for d > 0
i128 floor_div(i128 n, i128 d) {
  i128 q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

struct LatticeVec {
  i128 x, y;
};

i128 qform(const LatticeVec& a) { return a.x * a.x + 2 * a.y * a.y; }
i128 bilinear(const LatticeVec& a, const LatticeVec& b) { return a.x * b.x + 2 * a.y * b.y; }

// Shortest vector of the lattice {x + y*sqrt2 : x = -r*y mod p} under x^2 + 2y^2.
// Its Euclidean length is below 1.64p, so its norm is exactly +-p.
RingElt reduce_ideal(i64 p, i64 r) {
  LatticeVec b1{p, 0};
  LatticeVec b2{r, -1};
  if (qform(b1) < qform(b2)) std::swap(b1, b2);
  for (;;) {
    const i128 q2 = qform(b2);
    const i128 mu = floor_div(2 * bilinear(b1, b2) + q2, 2 * q2);
    b1.x -= mu * b2.x;
    b1.y -= mu * b2.y;
    if (qform(b1) >= q2) break;
    std::swap(b1, b2);
  }
  return RingElt{narrow(b2.x, "reduce_ideal"), narrow(b2.y, "reduce_ideal")};
}

// Totally positive associate of an element of norm +-p (p > 0).
RingElt totally_positive_associate(RingElt x) {
  if (norm(x) < 0) x = ring_mul(x, kEps);
  if (x.u < 0) x = RingElt{-x.u, -x.v};
  return x;
}

// Cornacchia: x^2 + d*y^2 = p for prime p, given r^2 = -d mod p.
std::pair<i64, i64> cornacchia(i64 d, i64 p) {
  i64 a = p;
  i64 b = sqrt_mod(-d, p);
  while (static_cast<i128>(b) * b > p) {
    const i64 t = a % b;
    a = b;
    b = t;
  }
  const i64 rest = p - b * b;
  if (rest % d != 0) throw NoRepresentationError("cornacchia failed for p=" + std::to_string(p));
  const i64 y = isqrt(rest / d);
  if (y * y * d != rest) throw NoRepresentationError("cornacchia failed for p=" + std::to_string(p));
  return {b, y};
}

i64 normalize_one_mod_four(i64 odd) { return mod_floor(odd, 4) == 1 ? odd : -odd; }

}  // namespace

std::ostream& operator<<(std::ostream& os, const RingElt& x) {
  return os << x.u << (x.v < 0 ? "-" : "+") << (x.v < 0 ? -x.v : x.v) << "*sqrt2";
}

i64 norm(const RingElt& x) {
  return narrow(static_cast<i128>(x.u) * x.u - 2 * static_cast<i128>(x.v) * x.v, "norm");
}

RingElt conj(const RingElt& x) { return {x.u, -x.v}; }

bool is_totally_positive(const RingElt& x) {
  return x.u > 0 && static_cast<i128>(x.u) * x.u > 2 * static_cast<i128>(x.v) * x.v;
}

RingElt ring_mul(const RingElt& x, const RingElt& y) {
  const i128 u = static_cast<i128>(x.u) * y.u + 2 * static_cast<i128>(x.v) * y.v;
  const i128 v = static_cast<i128>(x.u) * y.v + static_cast<i128>(x.v) * y.u;
  return {narrow(u, "ring_mul"), narrow(v, "ring_mul")};
}

RingElt apply_eps2(RingElt x, i64 k) {
  const RingElt step = k >= 0 ? kEps2 : kEps2Inv;
  for (i64 i = 0; i < (k >= 0 ? k : -k); ++i) x = ring_mul(x, step);
  return x;
}

RingElt canonical_generator(RingElt x) {
  if (!is_totally_positive(x)) throw DomainError("canonical_generator: element not totally positive");
  while (x.v < 0) x = ring_mul(x, kEps2);
  while (3 * static_cast<i128>(x.v) >= 2 * static_cast<i128>(x.u)) x = ring_mul(x, kEps2Inv);
  return x;
}

GaussRep two_squares(i64 p) {
  if (p < 5 || p % 4 != 1)
    throw NoRepresentationError("two_squares: p=" + std::to_string(p) + " is not 1 mod 4");
  auto [x, y] = cornacchia(1, p);
  if (x % 2 == 0) std::swap(x, y);
  return GaussRep{normalize_one_mod_four(x), y < 0 ? -y : y};
}

TwoRep one_two_rep(i64 p) {
  if (p < 3 || p % 2 == 0 || (p % 8 != 1 && p % 8 != 3))
    throw NoRepresentationError("one_two_rep: -2 is not a square mod " + std::to_string(p));
  auto [x, y] = cornacchia(2, p);
  return TwoRep{normalize_one_mod_four(x), y < 0 ? -y : y};
}

SplitGenerators split_generators(i64 p) {
  if (p < 7 || (p % 8 != 1 && p % 8 != 7))
    throw NoRepresentationError("split_generators: 2 is not a square mod " + std::to_string(p));
  const i64 r = sqrt_mod(2, p);
  const RingElt alpha = totally_positive_associate(reduce_ideal(p, r));
  if (norm(alpha) != p) throw NoRepresentationError("split_generators: reduction failed at p=" + std::to_string(p));
  return SplitGenerators{canonical_generator(alpha), canonical_generator(conj(alpha))};
}

PellRep pell_rep(i64 p) {
  const auto [first, second] = split_generators(p);
  // Canonical generators have the least positive v on their orbit, hence least u.
  RingElt x = first.u < second.u ? first : second;
  if (mod_floor(x.u, 4) != 1) x = ring_mul(x, kEps2);
  return PellRep{x.u, x.v};
}

GHPair gh_from_pell(const PellRep& r) {
  return GHPair{r.u + r.v, r.u + 2 * r.v};
}

bool z2_conditions(i64 p) {
  const GaussRep ab = two_squares(p);
  const TwoRep cd = one_two_rep(p);
  const PellRep uv = pell_rep(p);
  return mod_floor(ab.a, 8) == 1 && ab.b % 8 == 0 && mod_floor(cd.c, 8) == 1 && cd.d % 4 == 0 &&
         uv.u % 8 == 1 && uv.v % 4 == 0;
}

}  // namespace spin16
