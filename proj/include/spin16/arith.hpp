#pragma once

/**
 * @file arith.hpp
 * @brief Modular and multiplicative primitives shared by every other module.
 *
 * Everything here is a pure function of its arguments. Intermediates never
 * exceed 128 bits; the supported range for prime bounds is X <= 1e8.
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace spin16 {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

/// Largest prime bound accepted anywhere in the toolkit.
inline constexpr i64 kMaxBound = 100'000'000;

/// All primes up to a bound, ascending. Immutable after construction.
class PrimeList {
 public:
  PrimeList(i64 bound, std::vector<std::uint32_t> primes)
      : bound_(bound), primes_(std::move(primes)) {}

  i64 bound() const noexcept { return bound_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }
  i64 operator[](std::size_t i) const { return primes_[i]; }
  auto begin() const noexcept { return primes_.begin(); }
  auto end() const noexcept { return primes_.end(); }

 private:
  i64 bound_;
  std::vector<std::uint32_t> primes_;
};

/// Segmented sieve of Eratosthenes. Throws CapacityError above kMaxBound,
/// DomainError below 2.
PrimeList sieve_primes(i64 bound);

/// Deterministic Miller-Rabin; bases 2..17 are exact below 3.4e14.
bool is_prime(u64 n);

constexpr u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Least non-negative residue of a modulo m (m > 0).
constexpr i64 mod_floor(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

/// floor(sqrt(n)) for n >= 0, exact.
i64 isqrt(i64 n);

/// Jacobi symbol (a/n) for odd n >= 1; negative a is reduced mod n first.
int jacobi(i64 a, i64 n);

/// Kronecker symbol (a/n) for n >= 1.
int kronecker(i64 a, i64 n);

/// Smallest quadratic non-residue modulo an odd prime.
i64 smallest_nonresidue(i64 p);

/// The smaller square root r <= (p-1)/2 of a modulo an odd prime p.
/// Tonelli-Shanks seeded by the smallest non-residue, so output is reproducible.
i64 sqrt_mod(i64 a, i64 p);

/// [n/p]_4: +1 iff n is a fourth power modulo p. Requires p = 1 mod 4 and (n/p) = 1.
struct QuarticSymbol {
  int value;
  friend bool operator==(QuarticSymbol, QuarticSymbol) = default;
};

QuarticSymbol quartic_symbol(i64 n, i64 p);

/// p splits completely in Q(zeta_16, 2^(1/4)): p = 1 mod 16 and 2 is a fourth power mod p.
bool is_split_complete(i64 p);

}  // namespace spin16
