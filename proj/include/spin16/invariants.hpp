#pragma once

/**
 * @file invariants.hpp
 * @brief Per-prime dossiers: alpha_p, beta_p by every available route, the
 *        Leonard-Williams symbol identities, the Kaplan-Williams cell
 *        predictions for h+(2p) mod 16 and E_p, and the Hasse unit index.
 *
 * Conventions: h(-p) is the class number of discriminant -4p, h(-2p) of -8p,
 * h+(2p) the narrow class number of discriminant 8p. Any identity failure
 * throws IdentityViolation carrying the prime.
 */

#include <map>
#include <optional>
#include <string>

#include "spin16/arith.hpp"
#include "spin16/quadforms.hpp"
#include "spin16/zsqrt2.hpp"

namespace spin16 {

/// (alpha_p, beta_p).
struct CellLabel {
  int alpha;
  int beta;

  std::string str() const { return std::string(alpha > 0 ? "+" : "-") + (beta > 0 ? "+" : "-"); }
  friend bool operator==(const CellLabel&, const CellLabel&) = default;
};

/// Named identity checks, sorted by name so reports are reproducible.
using Verdicts = std::map<std::string, bool>;

/// Everything the alpha/beta routes consume for one prime p = 1 mod 8.
struct SplitInputs {
  i64 p;
  GaussRep ab;
  TwoRep cd;
  PellRep uv;
  GHPair gh;
  i64 h_neg_p;
  i64 h_neg_2p;
};

/// Representations plus h(-p), h(-2p) by the character sum. Requires p = 1 mod 8.
SplitInputs gather_split_inputs(i64 p);

struct AlphaRoutes {
  int class_number;  // (-1)^(h(-2p)/8)
  int quartic;       // [u/p]_4
  int value;
};

AlphaRoutes alpha_two_routes(const SplitInputs& in);
AlphaRoutes alpha_two_routes(i64 p);

struct BetaRoutes {
  int class_number;            // (-1)^((a-1+b+2d+h(-p)+h(-2p))/8)
  int spin_formula;            // (-1)^((p-1)/16) (-1)^(v/4) (v/u)
  std::optional<int> spin_average;  // character average of b_p(chi, psi)
  int value;
};

BetaRoutes beta_three_routes(const SplitInputs& in, bool with_spin_average = true);
BetaRoutes beta_three_routes(i64 p);

/// Checks, for p = 1 mod 8 with 8 | h(-p) and 8 | h(-2p): the four symbol
/// values (u/p), (-2/u), (g/p), (-1/g); the two quartic criteria; their product;
/// (2h/g) = (-1)^(v/4) (v/u); and the middle factor (2u/p) = 1.
Verdicts lw_identity_suite(const SplitInputs& in);
Verdicts lw_identity_suite(i64 p);

/// (2h/g) = (-1)^(v/4) (v/u) with g = u + v, h = u + 2v. Needs u = 1 mod 8,
/// v = 0 mod 4, u, v > 0, gcd(u, v) = 1. The prime-free core of lw_identity_suite.
bool last_factor_identity(i64 u, i64 v);

struct KwPrediction {
  CellLabel cell;
  int predicted_hplus_mod16;              // 0 or 8
  std::optional<int> predicted_e;         // absent for (+,+)
  int observed_hplus_mod16;
  int observed_e;
};

/// Compares the (alpha, beta) cell's prediction with independently computed
/// h+(2p) and E_p.
KwPrediction kw_classify(i64 p, CellLabel cell, i64 h_plus, int e_p);

/// (2 - r)^((p-1)/4) mod p is +-1 for both roots r of 2 and equals (-1)^((b+2d)/8).
bool first_factor_check(const SplitInputs& in);

/// Q(K) for K = Q(sqrt(2p), i): 1 iff E_p = -1.
int hasse_index(int e_p);

struct RecordOptions {
  bool spin_average = true;   // beta route 3
  bool classnum_audit = false; // re-derive h(-p), h(-2p) by enumeration
  bool pell_witness = false;
};

struct PrimeRecord {
  i64 p = 0;
  bool split_complete = false;
  std::optional<GaussRep> ab;
  std::optional<TwoRep> cd;
  std::optional<PellRep> uv;
  std::optional<GHPair> gh;
  std::optional<i64> h_neg_p;
  std::optional<i64> h_neg_2p;
  std::optional<i64> h_plus_2p;
  std::optional<int> e;
  std::optional<int> alpha;
  std::optional<int> beta;
  std::optional<int> hasse_q;
  std::optional<CellLabel> cell;
  std::optional<PellWitness> witness;
  Verdicts verdicts;
};

/// Full dossier for one prime. Runs every applicable identity; throws
/// IdentityViolation on the first failure. table must reach 2p.
PrimeRecord build_record(i64 p, const FactorTable& table, const RecordOptions& opts = {});

}  // namespace spin16
