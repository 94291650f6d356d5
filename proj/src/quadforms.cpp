#include "spin16/quadforms.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "spin16/errors.hpp"

namespace spin16 {

namespace {

bool squarefree(i64 n) {
  if (n < 0) n = -n;
  for (i64 q = 2; q * q <= n; ++q) {
    if (n % (q * q) == 0) return false;
  }
  return true;
}

i64 gcd3(i64 a, i64 b, i64 c) { return std::gcd(std::gcd(a, b), c); }

inline constexpr i64 kMaxFactorTable = 2 * kMaxBound;

}  // namespace

const char* to_string(ClassMethod m) {
  switch (m) {
    case ClassMethod::enumeration: return "enumeration";
    case ClassMethod::character_sum: return "character-sum";
    case ClassMethod::cycles: return "cycles";
  }
  return "?";
}

bool is_primitive(const BinaryForm& f) { return gcd3(f.a, f.b, f.c) == 1; }

bool is_reduced_definite(const BinaryForm& f) {
  const i64 ab = f.b < 0 ? -f.b : f.b;
  if (!(ab <= f.a && f.a <= f.c)) return false;
  if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

bool is_reduced_indefinite(const BinaryForm& f) {
  const i128 d = static_cast<i128>(f.b) * f.b - 4 * static_cast<i128>(f.a) * f.c;
  if (d <= 0 || f.b <= 0) return false;
  if (static_cast<i128>(f.b) * f.b >= d) return false;  // B < sqrt D
  const i128 two_a = 2 * static_cast<i128>(f.a < 0 ? -f.a : f.a);
  const bool lower = (f.b + two_a) * (f.b + two_a) > d;  // sqrt D - B < 2|A|
  const i128 gap = two_a - f.b;
  const bool upper = gap < 0 || gap * gap < d;           // 2|A| < sqrt D + B
  return lower && upper;
}

bool is_fundamental_discriminant(i64 d) {
  if (d == 0 || d == 1) return false;
  const i64 r = mod_floor(d, 4);
  if (r == 1) return squarefree(d);
  if (r != 0) return false;
  const i64 m = d / 4;
  const i64 rm = mod_floor(m, 4);
  return (rm == 2 || rm == 3) && squarefree(m);
}

ClassData class_number_enum(i64 d) {
  if (d >= 0 || (mod_floor(d, 4) != 0 && mod_floor(d, 4) != 1))
    throw DomainError("class_number_enum: invalid negative discriminant " + std::to_string(d));
  const i64 abs_d = -d;
  i64 count = 0;
  for (i64 a = 1; 3 * a * a <= abs_d; ++a) {
    // b has the parity of D.
    for (i64 b = -a + 1; b <= a; ++b) {
      if (((b - d) & 1) != 0) continue;
      const i64 num = b * b - d;
      if (num % (4 * a) != 0) continue;
      const i64 c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (gcd3(a, b, c) != 1) continue;
      ++count;
    }
  }
  return ClassData{d, count, ClassMethod::enumeration};
}

ClassData class_number_charsum(i64 d) {
  if (d >= 0 || !is_fundamental_discriminant(d))
    throw DomainError("class_number_charsum: " + std::to_string(d) +
                      " is not a negative fundamental discriminant");
  const i64 abs_d = -d;
  i64 sum = 0;
  for (i64 a = 1; 2 * a <= abs_d; ++a) sum += kronecker(d, a);
  const i64 w = d == -3 ? 6 : d == -4 ? 4 : 2;
  const i64 denom = 2 * (2 - kronecker(d, 2));
  if ((w * sum) % denom != 0)
    throw IdentityViolation(d, "classnum.charsum_integrality", "non-integral sum");
  return ClassData{d, w * sum / denom, ClassMethod::character_sum};
}

ImaginaryPair imaginary_class_numbers(i64 p) {
  if (p < 5 || p % 4 != 1) throw DomainError("imaginary_class_numbers: p must be 1 mod 4");
  thread_local std::vector<signed char> legendre;
  legendre.assign(static_cast<std::size_t>(p), -1);
  legendre[0] = 0;
  i64 sq = 0;
  for (i64 x = 1; 2 * x < p; ++x) {
    sq += 2 * x - 1;
    if (sq >= p) sq -= p;
    legendre[static_cast<std::size_t>(sq)] = 1;
  }

  // chi_{-4p}(a) = (-1)^((a-1)/2) (a/p); the terms for a and 2p - a coincide.
  i64 s4 = 0;
  for (i64 a = 1; a < p; a += 4) s4 += legendre[a];
  for (i64 a = 3; a < p; a += 4) s4 -= legendre[a];

  // chi_{-8p}(a) = (-2/a) (a/p); the terms for a and 4p - a coincide.
  i64 s8 = 0;
  for (i64 a = 1; a < 2 * p; a += 2) {
    const i64 r8 = a & 7;
    const int l = legendre[static_cast<std::size_t>(a < p ? a : a - p)];
    s8 += (r8 == 1 || r8 == 3) ? l : -l;
  }
  return ImaginaryPair{ClassData{-4 * p, s4, ClassMethod::character_sum},
                       ClassData{-8 * p, s8, ClassMethod::character_sum}};
}

PellOutcome pell_invariant(i64 p, bool with_witness) {
  if (p < 3 || p % 2 == 0) throw DomainError("pell_invariant: p must be an odd prime");
  const i64 n = 2 * p;
  const i64 a0 = isqrt(n);

  std::vector<i64> quotients{a0};
  i64 prev_p = 0, prev_q = 1, a = a0;
  i64 first_p = 0, first_q = 0;
  bool seen_m1 = false, seen_p2 = false, seen_m2 = false;
  i64 found_at = 0;
  int e = 0;
  i64 period = 0;
  for (i64 i = 1;; ++i) {
    const i64 pn = a * prev_q - prev_p;
    const i64 qn = (n - pn * pn) / prev_q;
    if (i == 1) {
      first_p = pn;
      first_q = qn;
    } else if (pn == first_p && qn == first_q) {
      period = i - 1;
      break;
    }
    // p_{i-1}^2 - n q_{i-1}^2 = (-1)^i Q_i
    const i64 value = (i % 2 == 0) ? qn : -qn;
    if (value == -1 || value == 2 || value == -2) {
      if (found_at == 0) {
        found_at = i;
        e = static_cast<int>(value);
      }
      (value == -1 ? seen_m1 : value == 2 ? seen_p2 : seen_m2) = true;
    }
    a = (a0 + pn) / qn;
    prev_p = pn;
    prev_q = qn;
    if (found_at == 0) quotients.push_back(a);
  }

  if (int(seen_m1) + int(seen_p2) + int(seen_m2) != 1)
    throw IdentityViolation(p, "pell.trichotomy", "expected exactly one of -1, +2, -2");
  if ((e == -1) != (period % 2 == 1))
    throw IdentityViolation(p, "pell.period_parity", "E_p = -1 must match an odd period");

  PellOutcome out{e, period, std::nullopt};
  if (with_witness) {
    // Convergent of index found_at - 1.
    mpz_class pm1 = 1, qm1 = 0, pk = quotients[0], qk = 1;
    for (i64 k = 1; k < found_at; ++k) {
      mpz_class np = quotients[k] * pk + pm1;
      mpz_class nq = quotients[k] * qk + qm1;
      pm1 = std::move(pk);
      qm1 = std::move(qk);
      pk = std::move(np);
      qk = std::move(nq);
    }
    out.witness = PellWitness{pk, qk};
  }
  return out;
}

FactorTable::FactorTable(i64 capacity) : capacity_(capacity) {
  if (capacity < 1) throw DomainError("FactorTable: capacity must be positive");
  if (capacity > kMaxFactorTable) throw CapacityError("FactorTable: capacity exceeds limit");
  spf_.assign(static_cast<std::size_t>(capacity) + 1, 0);
  std::vector<std::uint32_t> primes;
  for (i64 i = 2; i <= capacity; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t q : primes) {
      if (q > spf_[i] || static_cast<i64>(q) * i > capacity) break;
      spf_[static_cast<std::size_t>(q * i)] = q;
    }
  }
  spf_[1] = 1;
}

void FactorTable::divisors(i64 n, std::vector<i64>& out) const {
  if (n < 1 || n > capacity_) throw CapacityError("FactorTable: " + std::to_string(n) + " out of range");
  out.clear();
  out.push_back(1);
  while (n > 1) {
    const i64 q = spf_[static_cast<std::size_t>(n)];
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    const std::size_t base = out.size();
    i64 power = 1;
    for (int k = 0; k < e; ++k) {
      power *= q;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * power);
    }
  }
}

BinaryForm rho(const BinaryForm& f, i64 d, i64 sqrt_d) {
  const i64 two_c = 2 * (f.c < 0 ? -f.c : f.c);
  const i64 b = sqrt_d - mod_floor(sqrt_d + f.b, two_c);
  const i64 num = b * b - d;
  return BinaryForm{f.c, b, num / (4 * f.c)};
}

std::vector<BinaryForm> reduced_indefinite_forms(i64 p, const FactorTable& table) {
  if (p < 3 || p % 2 == 0) throw DomainError("narrow_class_number: p must be an odd prime");
  if (2 * p > table.capacity())
    throw CapacityError("narrow_class_number: discriminant " + std::to_string(8 * p) +
                        " beyond factor-table capacity");
  const i64 d = 8 * p;
  const i64 s = isqrt(d);
  std::vector<BinaryForm> forms;
  thread_local std::vector<i64> divs;
  for (i64 half_b = 1; 2 * half_b <= s; ++half_b) {
    const i64 b = 2 * half_b;
    const i64 m = 2 * p - half_b * half_b;  // |AC|
    table.divisors(m, divs);
    for (i64 a : divs) {
      const i64 two_a = 2 * a;
      if ((b + two_a) * (b + two_a) <= d) continue;
      const i64 gap = two_a - b;
      if (gap >= 0 && gap * gap >= d) continue;
      const i64 c = m / a;
      if (gcd3(a, b, c) != 1) continue;
      forms.push_back(BinaryForm{a, b, -c});
      forms.push_back(BinaryForm{-a, b, c});
    }
  }
  std::sort(forms.begin(), forms.end());
  return forms;
}

ClassData narrow_class_number(i64 p, const FactorTable& table) {
  const auto forms = reduced_indefinite_forms(p, table);
  const i64 d = 8 * p;
  const i64 s = isqrt(d);
  std::vector<char> visited(forms.size(), 0);
  i64 cycles = 0;
  for (std::size_t start = 0; start < forms.size(); ++start) {
    if (visited[start]) continue;
    ++cycles;
    std::size_t at = start;
    while (!visited[at]) {
      visited[at] = 1;
      const BinaryForm next = rho(forms[at], d, s);
      const auto it = std::lower_bound(forms.begin(), forms.end(), next);
      if (it == forms.end() || *it != next)
        throw IdentityViolation(p, "narrow.rho_closure", "rho left the reduced set");
      at = static_cast<std::size_t>(it - forms.begin());
    }
    if (at != start) throw IdentityViolation(p, "narrow.rho_cycle", "rho is not a permutation");
  }
  return ClassData{d, cycles, ClassMethod::cycles};
}

TwoPart two_part(i64 h) {
  if (h < 1) throw DomainError("two_part: h must be positive");
  int v = 0;
  while (h % 2 == 0) {
    h /= 2;
    ++v;
  }
  return TwoPart{v, h};
}

}  // namespace spin16
