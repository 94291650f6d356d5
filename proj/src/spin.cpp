#include "spin16/spin.hpp"

#include <algorithm>
#include <sstream>

#include "spin16/errors.hpp"

namespace spin16 {

namespace {

constexpr Gauss kUnits[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

CharacterTable make_character(int modulus, std::span<const i64> generators,
                              std::span<const int> orders, std::span<const Gauss> images) {
  CharacterTable t;
  t.modulus = modulus;
  // Walk every product g1^e1 g2^e2 of the generators.
  for (int e1 = 0; e1 < orders[0]; ++e1) {
    for (int e2 = 0; e2 < orders[1]; ++e2) {
      i64 n = 1;
      Gauss value{1, 0};
      for (int k = 0; k < e1; ++k) {
        n = n * generators[0] % modulus;
        value = value * images[0];
      }
      for (int k = 0; k < e2; ++k) {
        n = n * generators[1] % modulus;
        value = value * images[1];
      }
      t.values[static_cast<std::size_t>(n)] = value;
    }
  }
  return t;
}

std::array<RingElt, 4> orbit(const RingElt& seed) {
  std::array<RingElt, 4> out{seed, {}, {}, {}};
  for (int k = 1; k < 4; ++k) out[k] = ring_mul(out[k - 1], kEps2);
  return out;
}

// Doubled b_n given the four brackets (v/u) and coordinates along the orbit.
struct OrbitData {
  i64 norm;
  std::array<RingElt, 4> elts;
  std::array<int, 4> brackets;
};

OrbitData orbit_data(const RingElt& seed) {
  if (!is_totally_positive(seed)) throw DomainError("spin: generator must be totally positive");
  OrbitData d{norm(seed), orbit(seed), {}};
  if (d.norm % 2 == 0) return d;
  for (int k = 0; k < 4; ++k) d.brackets[k] = jacobi(d.elts[k].v, d.elts[k].u);
  return d;
}

SpinValue spin_from_orbit(const OrbitData& d, const CharacterTable& chi, const CharacterTable& psi) {
  if (mod_floor(d.norm, 8) != 1) return {};
  Gauss sum{};
  for (int k = 0; k < 4; ++k) {
    const RingElt& x = d.elts[k];
    sum += i_pow(x.v / 2) * chi(x.u) * Gauss{d.brackets[k], 0};
  }
  const Gauss doubled = psi(d.norm) * i_pow((d.norm - 1) / 8) * sum;
  return SpinValue{doubled.re, doubled.im};
}

}  // namespace

Gauss i_pow(i64 k) { return kUnits[mod_floor(k, 4)]; }

std::string CharacterTable::label() const {
  std::ostringstream os;
  os << "mod" << modulus << "[";
  bool first = true;
  for (int n = 1; n < modulus; n += 2) {
    const Gauss v = values[static_cast<std::size_t>(n)];
    if (!first) os << ",";
    first = false;
    if (v == Gauss{1, 0}) os << "1";
    else if (v == Gauss{-1, 0}) os << "-1";
    else if (v == Gauss{0, 1}) os << "i";
    else os << "-i";
  }
  os << "]";
  return os.str();
}

const std::array<CharacterTable, 4>& characters_mod8() {
  static const std::array<CharacterTable, 4> table = [] {
    std::array<CharacterTable, 4> out;
    const i64 gens[2] = {3, 7};
    const int orders[2] = {2, 2};
    const Gauss signs[2] = {{1, 0}, {-1, 0}};
    int idx = 0;
    for (Gauss at3 : signs)
      for (Gauss at7 : signs) {
        const Gauss images[2] = {at3, at7};
        out[idx++] = make_character(8, gens, orders, images);
      }
    return out;
  }();
  return table;
}

const std::array<CharacterTable, 8>& characters_mod16() {
  static const std::array<CharacterTable, 8> table = [] {
    std::array<CharacterTable, 8> out;
    const i64 gens[2] = {3, 15};
    const int orders[2] = {4, 2};
    int idx = 0;
    for (int j = 0; j < 4; ++j)
      for (Gauss at15 : {Gauss{1, 0}, Gauss{-1, 0}}) {
        const Gauss images[2] = {kUnits[j], at15};
        out[idx++] = make_character(16, gens, orders, images);
      }
    return out;
  }();
  return table;
}

std::string to_string(const SpinValue& s) {
  std::ostringstream os;
  os << "(" << s.re2 << (s.im2 < 0 ? "-" : "+") << (s.im2 < 0 ? -s.im2 : s.im2) << "i)/2";
  return os.str();
}

int bracket(const RingElt& x) {
  if (!is_totally_positive(x)) throw DomainError("bracket: element not totally positive");
  if (x.u % 2 == 0) throw DomainError("bracket: element is even");
  return jacobi(x.v, x.u);
}

Gauss bracket_chi(const RingElt& x, const CharacterTable& chi) {
  if (x.v % 2 != 0) throw DomainError("bracket_chi: v must be even");
  return i_pow(x.v / 2) * chi(x.u) * Gauss{bracket(x), 0};
}

SpinValue spin_b_from_seed(const RingElt& seed, const CharacterTable& chi, const CharacterTable& psi) {
  return spin_from_orbit(orbit_data(seed), chi, psi);
}

SpinValue spin_b(const IdealRep& n, const CharacterTable& chi, const CharacterTable& psi) {
  return spin_b_from_seed(n.gen, chi, psi);
}

void for_each_ideal(i64 bound, const std::function<void(const IdealRep&)>& visit) {
  if (bound < 1) throw DomainError("enumerate_ideals: bound must be >= 1");
  // In the domain v < 2u/3, so N = u^2 - 2v^2 > u^2/9 and u < 3 sqrt(X).
  const i64 u_max = 3 * isqrt(bound) + 3;
  for (i64 u = 1; u <= u_max; u += 2) {
    const i64 v_hi = (2 * u - 1) / 3;
    i64 v_lo = 0;
    const i128 excess = static_cast<i128>(u) * u - bound;
    if (excess > 0) {
      v_lo = isqrt(static_cast<i64>((excess + 1) / 2));
      while (2 * static_cast<i128>(v_lo) * v_lo < excess) ++v_lo;
    }
    for (i64 v = v_lo; v <= v_hi; ++v) visit(IdealRep{RingElt{u, v}});
  }
}

std::vector<IdealRep> enumerate_ideals(i64 bound) {
  std::vector<IdealRep> out;
  for_each_ideal(bound, [&](const IdealRep& n) { out.push_back(n); });
  return out;
}

std::vector<IdealRep> prime_ideals_above(i64 p) {
  if (p < 3 || p % 2 == 0) throw DomainError("prime_ideals_above: p must be an odd prime");
  if (p % 8 == 1 || p % 8 == 7) {
    const auto gens = split_generators(p);
    return {IdealRep{gens.first}, IdealRep{gens.second}};
  }
  return {IdealRep{RingElt{p, 0}}};
}

int recover_beta(const IdealRep& prime_ideal) {
  const OrbitData d = orbit_data(prime_ideal.gen);
  const i64 p = d.norm;
  if (p < 3 || (p % 8 != 1 && p % 8 != 7) || !is_prime(static_cast<u64>(p)))
    throw DomainError("recover_beta: ideal does not lie above a split prime");
  Gauss total{};
  for (const auto& chi : characters_mod8())
    for (const auto& psi : characters_mod16()) {
      const SpinValue b = spin_from_orbit(d, chi, psi);
      total += Gauss{b.re2, b.im2};
    }
  // total = 2 * 32 * average
  if (total.im != 0 || total.re % 64 != 0)
    throw IdentityViolation(p, "spin.agreement_integrality", "character average not in {-1,0,1}");
  const i64 avg = total.re / 64;
  if (avg < -1 || avg > 1)
    throw IdentityViolation(p, "spin.agreement_integrality", "character average out of range");
  return static_cast<int>(avg);
}

int recover_beta(i64 p) {
  if (p < 3 || (p % 8 != 1 && p % 8 != 7))
    throw DomainError("recover_beta: p=" + std::to_string(p) + " is not split in Z[sqrt2]");
  return recover_beta(IdealRep{split_generators(p).first});
}

std::vector<PartialSumRow> partial_sums(const PrimeList& primes, std::span<const i64> checkpoints,
                                        const CharacterTable& chi, const CharacterTable& psi,
                                        std::span<const SignedPrime> signed_primes) {
  if (checkpoints.empty()) return {};
  const i64 top = checkpoints.back();
  if (top > primes.bound()) throw DomainError("partial_sums: prime list does not reach last checkpoint");

  struct Event {
    i64 norm;
    Gauss doubled;
  };
  std::vector<Event> events;
  for (i64 p : primes) {
    if (p > top) break;
    if (p == 2) {
      events.push_back({2, {}});
      continue;
    }
    if (p % 8 == 1 || p % 8 == 7) {
      for (const IdealRep& n : prime_ideals_above(p)) {
        const SpinValue b = spin_b(n, chi, psi);
        events.push_back({p, {b.re2, b.im2}});
      }
    } else if (static_cast<i128>(p) * p <= top) {
      const SpinValue b = spin_b(IdealRep{RingElt{p, 0}}, chi, psi);
      events.push_back({p * p, {b.re2, b.im2}});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.norm < b.norm; });

  std::vector<PartialSumRow> rows;
  rows.reserve(checkpoints.size());
  PartialSumRow acc{};
  std::size_t ei = 0, si = 0;
  for (i64 x : checkpoints) {
    while (ei < events.size() && events[ei].norm <= x) {
      acc.prime_ideals += 1;
      acc.spin_sum_doubled += events[ei].doubled;
      ++ei;
    }
    while (si < signed_primes.size() && signed_primes[si].p <= x) {
      const SignedPrime& s = signed_primes[si];
      acc.split_complete += 1;
      acc.sum_alpha += s.alpha;
      acc.sum_beta += s.beta;
      acc.sum_alpha_beta += s.alpha * s.beta;
      ++si;
    }
    acc.x = x;
    rows.push_back(acc);
  }
  return rows;
}

}  // namespace spin16
