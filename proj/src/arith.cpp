#include "spin16/arith.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spin16/errors.hpp"

namespace spin16 {

namespace {

constexpr i64 kSegmentBytes = 1 << 18;

std::vector<std::uint32_t> small_primes(i64 limit) {
  std::vector<char> composite(static_cast<std::size_t>(limit) + 1, 0);
  std::vector<std::uint32_t> out;
  for (i64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (i64 j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return out;
}

bool miller_rabin_round(u64 n, u64 d, int s, u64 a) {
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

PrimeList sieve_primes(i64 bound) {
  if (bound < 2) throw DomainError("sieve_primes: bound must be >= 2, got " + std::to_string(bound));
  if (bound > kMaxBound)
    throw CapacityError("sieve_primes: bound " + std::to_string(bound) + " exceeds " +
                        std::to_string(kMaxBound));

  const i64 root = isqrt(bound);
  const auto base = small_primes(root);

  std::vector<std::uint32_t> primes;
  primes.reserve(static_cast<std::size_t>(1.3 * bound / std::max(1.0, std::log(double(bound)))) + 16);
  primes.push_back(2);

  // Segment index j stands for the odd number lo + 2j.
  std::vector<char> segment(kSegmentBytes);
  for (i64 lo = 3; lo <= bound; lo += 2 * kSegmentBytes) {
    const i64 hi = std::min(bound, lo + 2 * kSegmentBytes - 1);
    const i64 len = (hi - lo) / 2 + 1;
    std::fill(segment.begin(), segment.begin() + len, 0);
    for (std::size_t k = 1; k < base.size(); ++k) {
      const i64 q = base[k];
      if (q * q > hi) break;
      i64 start = std::max(q * q, (lo + q - 1) / q * q);
      if (start % 2 == 0) start += q;
      for (i64 m = start; m <= hi; m += 2 * q) segment[(m - lo) / 2] = 1;
    }
    for (i64 j = 0; j < len; ++j)
      if (!segment[j]) primes.push_back(static_cast<std::uint32_t>(lo + 2 * j));
  }
  return PrimeList(bound, std::move(primes));
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17};
  for (u64 q : kBases) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kBases)
    if (!miller_rabin_round(n, d, s, a)) return false;
  return true;
}

i64 isqrt(i64 n) {
  if (n < 0) throw DomainError("isqrt of negative value");
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<i128>(r) * r > n) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

int jacobi(i64 a, i64 n) {
  if (n <= 0 || n % 2 == 0)
    throw DomainError("jacobi: modulus must be odd and positive, got " + std::to_string(n));
  u64 x = static_cast<u64>(mod_floor(a, n));
  u64 m = static_cast<u64>(n);
  int t = 1;
  while (x != 0) {
    while ((x & 1) == 0) {
      x >>= 1;
      const u64 r = m & 7;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(x, m);
    if ((x & 3) == 3 && (m & 3) == 3) t = -t;
    x %= m;
  }
  return m == 1 ? t : 0;
}

int kronecker(i64 a, i64 n) {
  if (n <= 0) throw DomainError("kronecker: modulus must be positive");
  int t = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    const i64 r = mod_floor(a, 8);
    if (r == 3 || r == 5) t = -t;
  }
  return t * jacobi(a, n);
}

i64 smallest_nonresidue(i64 p) {
  if (p < 3 || p % 2 == 0) throw DomainError("smallest_nonresidue: p must be an odd prime");
  for (i64 z = 2; z < p; ++z)
    if (jacobi(z, p) == -1) return z;
  throw DomainError("smallest_nonresidue: no non-residue, p is not prime");
}

i64 sqrt_mod(i64 a, i64 p) {
  if (p < 3 || p % 2 == 0) throw DomainError("sqrt_mod: p must be an odd prime");
  const i64 x = mod_floor(a, p);
  if (jacobi(x, p) != 1)
    throw NoRootError("sqrt_mod: " + std::to_string(a) + " is not a non-zero square mod " +
                      std::to_string(p));

  const u64 m = static_cast<u64>(p);
  u64 root;
  if (p % 4 == 3) {
    root = pow_mod(x, (m + 1) / 4, m);
  } else {
    u64 q = m - 1;
    int s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    u64 c = pow_mod(static_cast<u64>(smallest_nonresidue(p)), q, m);
    u64 t = pow_mod(x, q, m);
    root = pow_mod(x, (q + 1) / 2, m);
    int level = s;
    while (t != 1) {
      int i = 0;
      u64 t2 = t;
      while (t2 != 1) {
        t2 = mul_mod(t2, t2, m);
        ++i;
      }
      u64 b = c;
      for (int j = 0; j < level - i - 1; ++j) b = mul_mod(b, b, m);
      level = i;
      c = mul_mod(b, b, m);
      t = mul_mod(t, c, m);
      root = mul_mod(root, b, m);
    }
  }
  const i64 r = static_cast<i64>(root);
  return std::min(r, p - r);
}

QuarticSymbol quartic_symbol(i64 n, i64 p) {
  if (p < 5 || p % 4 != 1) throw DomainError("quartic_symbol: p must be a prime = 1 mod 4");
  if (jacobi(n, p) != 1)
    throw UndefinedSymbolError("quartic_symbol: (" + std::to_string(n) + "/" + std::to_string(p) +
                               ") != 1");
  const u64 t = pow_mod(static_cast<u64>(mod_floor(n, p)), static_cast<u64>(p - 1) / 4,
                        static_cast<u64>(p));
  return QuarticSymbol{t == 1 ? 1 : -1};
}

bool is_split_complete(i64 p) {
  if (p == 2) throw DomainError("is_split_complete: p = 2 is ramified");
  if (p < 3 || p % 2 == 0) throw DomainError("is_split_complete: p must be an odd prime");
  if (p % 16 != 1) return false;
  return pow_mod(2, static_cast<u64>(p - 1) / 4, static_cast<u64>(p)) == 1;
}

}  // namespace spin16
