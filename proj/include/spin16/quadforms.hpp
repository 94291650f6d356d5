#pragma once

/**
 * @file quadforms.hpp
 * @brief Class numbers from binary quadratic forms.
 *
 * Imaginary discriminants: reduced-form enumeration and the Dirichlet
 * character-sum formula, kept as independent routes. Real discriminant 8p:
 * cycles of reduced indefinite forms (narrow class number) and the
 * continued fraction of sqrt(2p) (the invariant E_p).
 */

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "spin16/arith.hpp"

namespace spin16 {

/// A x^2 + B xy + C y^2.
struct BinaryForm {
  i64 a;
  i64 b;
  i64 c;

  i64 discriminant() const { return b * b - 4 * a * c; }
  friend bool operator==(const BinaryForm&, const BinaryForm&) = default;
  friend auto operator<=>(const BinaryForm&, const BinaryForm&) = default;
};

bool is_primitive(const BinaryForm& f);
/// |B| <= A <= C, B >= 0 if |B| = A or A = C.
bool is_reduced_definite(const BinaryForm& f);
/// 0 < B < sqrt(D) and sqrt(D) - B < 2|A| < sqrt(D) + B, exact in integers.
bool is_reduced_indefinite(const BinaryForm& f);

enum class ClassMethod { enumeration, character_sum, cycles };

const char* to_string(ClassMethod m);

struct ClassData {
  i64 discriminant;
  i64 h;
  ClassMethod method;
};

bool is_fundamental_discriminant(i64 d);

/// Number of reduced primitive positive definite forms of discriminant D < 0.
ClassData class_number_enum(i64 d);

/// Dirichlet's formula h = w / (2 (2 - chi(2))) * sum_{0 < a < |D|/2} (D/a),
/// for fundamental D < 0. DomainError on anything else.
ClassData class_number_charsum(i64 d);

/// h(-4p) and h(-8p) for p = 1 mod 4 by the character sum, evaluated through a
/// single Legendre table modulo p.
struct ImaginaryPair {
  ClassData neg_p;
  ClassData neg_2p;
};
ImaginaryPair imaginary_class_numbers(i64 p);

struct PellWitness {
  mpz_class x;
  mpz_class y;
};

/// E_p in {-1, +2, -2}: the unique value with x^2 - 2p y^2 = E_p solvable.
struct PellOutcome {
  int e = 0;
  i64 period = 0;
  std::optional<PellWitness> witness;
};

/// Scans one period of the continued fraction of sqrt(2p) with the exact (P, Q)
/// recurrence; the witness is the matching convergent, built only on request.
PellOutcome pell_invariant(i64 p, bool with_witness = false);

/// Smallest-prime-factor table on [0, capacity], read-only after construction.
class FactorTable {
 public:
  explicit FactorTable(i64 capacity);

  i64 capacity() const noexcept { return capacity_; }
  i64 smallest_factor(i64 n) const { return spf_[static_cast<std::size_t>(n)]; }

  /// Positive divisors of n (unordered) appended to out after clearing it.
  void divisors(i64 n, std::vector<i64>& out) const;

 private:
  i64 capacity_;
  std::vector<std::uint32_t> spf_;
};

/// h+(2p): number of rho-cycles of reduced indefinite forms of discriminant 8p.
/// Requires 2p <= table.capacity().
ClassData narrow_class_number(i64 p, const FactorTable& table);

/// The reduced indefinite forms of discriminant 8p, sorted.
std::vector<BinaryForm> reduced_indefinite_forms(i64 p, const FactorTable& table);

/// rho(A, B, C) = (C, B', C') with B' = -B mod 2|C| taken in (sqrt D - 2|C|, sqrt D).
BinaryForm rho(const BinaryForm& f, i64 d, i64 sqrt_d);

struct TwoPart {
  int valuation;
  i64 odd_part;
  friend bool operator==(const TwoPart&, const TwoPart&) = default;
};
TwoPart two_part(i64 h);

}  // namespace spin16
