#include "spin16/invariants.hpp"

#include <numeric>

#include "spin16/errors.hpp"
#include "spin16/spin.hpp"

namespace spin16 {

namespace {

int sign_of_parity(i64 n) { return mod_floor(n, 2) == 0 ? 1 : -1; }

// (-1)^(n/8), requiring 8 | n.
int sign_eighth(i64 p, i64 n, const char* identity) {
  if (mod_floor(n, 8) != 0)
    throw IdentityViolation(p, identity, "exponent numerator " + std::to_string(n) + " not divisible by 8");
  return sign_of_parity(n / 8);
}

void require(Verdicts& out, i64 p, const std::string& name, bool ok, const std::string& detail = {}) {
  out[name] = ok;
  if (!ok) throw IdentityViolation(p, name, detail);
}

void require_split_complete(i64 p, const char* op) {
  if (!is_split_complete(p))
    throw DomainError(std::string(op) + ": p=" + std::to_string(p) + " is not split completely");
}

}  // namespace

SplitInputs gather_split_inputs(i64 p) {
  if (p % 8 != 1) throw DomainError("gather_split_inputs: p must be 1 mod 8");
  const PellRep uv = pell_rep(p);
  const ImaginaryPair h = imaginary_class_numbers(p);
  return SplitInputs{p, two_squares(p), one_two_rep(p), uv, gh_from_pell(uv), h.neg_p.h, h.neg_2p.h};
}

AlphaRoutes alpha_two_routes(const SplitInputs& in) {
  require_split_complete(in.p, "alpha_two_routes");
  AlphaRoutes r{};
  r.class_number = sign_eighth(in.p, in.h_neg_2p, "alpha.class_number_route");
  if (jacobi(in.uv.u, in.p) != 1)
    throw IdentityViolation(in.p, "alpha.quartic_route", "(u/p) != 1, [u/p]_4 undefined");
  r.quartic = quartic_symbol(in.uv.u, in.p).value;
  if (r.class_number != r.quartic)
    throw IdentityViolation(in.p, "alpha.two_routes", "class-number route " + std::to_string(r.class_number) +
                                                          " vs quartic route " + std::to_string(r.quartic));
  r.value = r.class_number;
  return r;
}

AlphaRoutes alpha_two_routes(i64 p) {
  require_split_complete(p, "alpha_two_routes");
  return alpha_two_routes(gather_split_inputs(p));
}

BetaRoutes beta_three_routes(const SplitInputs& in, bool with_spin_average) {
  require_split_complete(in.p, "beta_three_routes");
  const i64 p = in.p;
  BetaRoutes r{};
  r.class_number =
      sign_eighth(p, in.ab.a - 1 + in.ab.b + 2 * in.cd.d + in.h_neg_p + in.h_neg_2p, "beta.class_number_route");
  if (in.uv.v % 4 != 0) throw IdentityViolation(p, "beta.spin_formula", "v not divisible by 4");
  r.spin_formula = sign_of_parity((p - 1) / 16) * sign_of_parity(in.uv.v / 4) * jacobi(in.uv.v, in.uv.u);
  if (r.class_number != r.spin_formula)
    throw IdentityViolation(p, "beta.routes_1_2", "class-number route " + std::to_string(r.class_number) +
                                                      " vs final formula " + std::to_string(r.spin_formula));
  if (with_spin_average) {
    const IdealRep ideal = IdealRep::from_generator(in.uv.elt());
    const IdealRep other = IdealRep::from_generator(conj(in.uv.elt()));
    const int b1 = recover_beta(ideal);
    const int b2 = recover_beta(other);
    if (b1 != b2)
      throw IdentityViolation(p, "beta.conjugate_symmetry", "spin averages differ on conjugate ideals");
    if (b1 != r.class_number)
      throw IdentityViolation(p, "beta.routes_1_3", "class-number route " + std::to_string(r.class_number) +
                                                        " vs spin average " + std::to_string(b1));
    r.spin_average = b1;
  }
  r.value = r.class_number;
  return r;
}

BetaRoutes beta_three_routes(i64 p) {
  require_split_complete(p, "beta_three_routes");
  return beta_three_routes(gather_split_inputs(p), true);
}

bool last_factor_identity(i64 u, i64 v) {
  if (u <= 0 || v <= 0 || u % 8 != 1 || v % 4 != 0 || std::gcd(u, v) != 1)
    throw DomainError("last_factor_identity: need u = 1 mod 8, v = 0 mod 4, coprime, positive");
  const i64 g = u + v;
  const i64 h = u + 2 * v;
  return jacobi(2 * h, g) == sign_of_parity(v / 4) * jacobi(v, u);
}

Verdicts lw_identity_suite(const SplitInputs& in) {
  const i64 p = in.p;
  if (p % 8 != 1 || in.h_neg_p % 8 != 0 || in.h_neg_2p % 8 != 0)
    throw DomainError("lw_identity_suite: needs p = 1 mod 8 with 8 | h(-p), 8 | h(-2p)");
  Verdicts out;
  const i64 u = in.uv.u, v = in.uv.v, g = in.gh.g, h = in.gh.h;

  require(out, p, "lw.crit8rank1.u_over_p", jacobi(u, p) == 1);
  require(out, p, "lw.crit8rank1.m2_over_u", jacobi(-2, u) == 1);
  require(out, p, "lw.crit8rank1.g_over_p", jacobi(g, p) == 1);
  require(out, p, "lw.crit8rank1.m1_over_g", jacobi(-1, g) == 1);
  require(out, p, "lw.congruences", u % 8 == 1 && g % 4 == 1 && v % 4 == 0);
  require(out, p, "lw.middle_factor", jacobi(2 * u, p) == 1);

  const int sym_u = quartic_symbol(u, p).value;
  const int sym_g = quartic_symbol(g, p).value;
  const int two_h_over_g = jacobi(2 * h, g);
  const int alpha_side = sign_of_parity(in.h_neg_2p / 8);
  const int neg_p_side = sign_of_parity(in.h_neg_p / 8);

  require(out, p, "lw.A", alpha_side == sym_u, "(-1)^(h(-2p)/8) vs [u/p]_4");
  require(out, p, "lw.B", neg_p_side == sym_g * two_h_over_g, "(-1)^(h(-p)/8) vs [g/p]_4 (2h/g)");
  require(out, p, "lw.overZ",
          sign_of_parity((in.h_neg_p + in.h_neg_2p) / 8) == sym_u * sym_g * two_h_over_g);
  require(out, p, "lw.last_factor", two_h_over_g == sign_of_parity(v / 4) * jacobi(v, u));
  return out;
}

Verdicts lw_identity_suite(i64 p) { return lw_identity_suite(gather_split_inputs(p)); }

KwPrediction kw_classify(i64 p, CellLabel cell, i64 h_plus, int e_p) {
  require_split_complete(p, "kw_classify");
  KwPrediction k{};
  k.cell = cell;
  k.observed_hplus_mod16 = static_cast<int>(h_plus % 16);
  k.observed_e = e_p;
  if (cell.alpha == 1 && cell.beta == 1) {
    k.predicted_hplus_mod16 = 0;
  } else {
    k.predicted_hplus_mod16 = 8;
    k.predicted_e = cell.alpha == 1 ? -2 : (cell.beta == 1 ? 2 : -1);
  }
  const bool ok = k.predicted_hplus_mod16 == k.observed_hplus_mod16 &&
                  (!k.predicted_e || *k.predicted_e == k.observed_e);
  if (!ok)
    throw IdentityViolation(p, "kw.cell_prediction",
                            "cell " + cell.str() + " but h+ mod 16 = " + std::to_string(k.observed_hplus_mod16) +
                                ", E = " + std::to_string(e_p));
  return k;
}

bool first_factor_check(const SplitInputs& in) {
  const i64 p = in.p;
  require_split_complete(p, "first_factor_check");
  const i64 r = sqrt_mod(2, p);
  const u64 exponent = static_cast<u64>(p - 1) / 4;
  int values[2] = {0, 0};
  for (int k = 0; k < 2; ++k) {
    const i64 root = k == 0 ? r : p - r;
    const u64 t = pow_mod(static_cast<u64>(mod_floor(2 - root, p)), exponent, static_cast<u64>(p));
    if (t == 1) values[k] = 1;
    else if (t == static_cast<u64>(p - 1)) values[k] = -1;
    else throw IdentityViolation(p, "first_factor.pm_one", "(2-r)^((p-1)/4) is a primitive fourth root of unity");
  }
  if (values[0] != values[1]) throw IdentityViolation(p, "first_factor.root_choice", "roots r and p-r disagree");
  const int predicted = sign_eighth(p, in.ab.b + 2 * in.cd.d, "first_factor.exponent");
  if (values[0] != predicted) throw IdentityViolation(p, "first_factor.value", "(2-r)^((p-1)/4) vs (-1)^((b+2d)/8)");
  return true;
}

int hasse_index(int e_p) {
  if (e_p != -1 && e_p != 2 && e_p != -2) throw DomainError("hasse_index: E_p must be -1 or +-2");
  return e_p == -1 ? 1 : 2;
}

PrimeRecord build_record(i64 p, const FactorTable& table, const RecordOptions& opts) {
  PrimeRecord rec;
  rec.p = p;
  if (p == 2) return rec;
  if (p < 3 || p % 2 == 0) throw DomainError("build_record: p must be prime");

  rec.split_complete = is_split_complete(p);
  const i64 r8 = p % 8;
  if (p % 4 == 1) rec.ab = two_squares(p);
  if (r8 == 1 || r8 == 3) rec.cd = one_two_rep(p);
  if (r8 == 1 || r8 == 7) {
    rec.uv = pell_rep(p);
    rec.gh = gh_from_pell(*rec.uv);
  }

  PellOutcome pell = pell_invariant(p, opts.pell_witness);
  rec.e = pell.e;
  rec.witness = std::move(pell.witness);
  rec.verdicts["pell.trichotomy"] = true;
  rec.hasse_q = hasse_index(pell.e);

  const i64 h_plus = narrow_class_number(p, table).h;
  rec.h_plus_2p = h_plus;
  require(rec.verdicts, p, "genus.hplus_even", h_plus % 2 == 0);
  require(rec.verdicts, p, "split.reflection_hplus", (h_plus % 8 == 0) == rec.split_complete,
          "8 | h+(2p) must match complete splitting");

  if (r8 != 1) return rec;

  const ImaginaryPair h = imaginary_class_numbers(p);
  const SplitInputs inputs{p, *rec.ab, *rec.cd, *rec.uv, *rec.gh, h.neg_p.h, h.neg_2p.h};
  rec.h_neg_p = inputs.h_neg_p;
  rec.h_neg_2p = inputs.h_neg_2p;

  if (opts.classnum_audit) {
    require(rec.verdicts, p, "classnum.audit",
            class_number_enum(-4 * p).h == inputs.h_neg_p && class_number_enum(-8 * p).h == inputs.h_neg_2p,
            "enumeration disagrees with character sum");
  }

  const bool by_class_numbers = inputs.h_neg_p % 8 == 0 && inputs.h_neg_2p % 8 == 0;
  const bool by_congruences = z2_conditions(p);
  require(rec.verdicts, p, "split.three_way",
          by_class_numbers == rec.split_complete && by_congruences == rec.split_complete,
          "power test " + std::to_string(rec.split_complete) + ", congruences " + std::to_string(by_congruences) +
              ", class numbers " + std::to_string(by_class_numbers));

  if (by_class_numbers) {
    for (auto& [name, ok] : lw_identity_suite(inputs)) rec.verdicts[name] = ok;
  }
  if (!rec.split_complete) return rec;

  const AlphaRoutes alpha = alpha_two_routes(inputs);
  rec.verdicts["alpha.two_routes"] = true;
  const BetaRoutes beta = beta_three_routes(inputs, opts.spin_average);
  rec.verdicts["beta.routes_1_2"] = true;
  if (beta.spin_average) rec.verdicts["beta.routes_1_3"] = true;
  first_factor_check(inputs);
  rec.verdicts["first_factor"] = true;

  rec.alpha = alpha.value;
  rec.beta = beta.value;
  rec.cell = CellLabel{alpha.value, beta.value};
  kw_classify(p, *rec.cell, h_plus, pell.e);
  rec.verdicts["kw.cell_prediction"] = true;
  return rec;
}

}  // namespace spin16
