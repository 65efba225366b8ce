// Copyright 2026 The derivid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Verifiers for the derivative identities built on
//
//   sum_{|k|=n} C(n; k) prod_i (f_i g_i^{k_i})^{(s_i)}
//       = 0                                   if |s| < n,
//       = n! prod_i f_i prod_i (g_i')^{s_i}   if |s| = n,
//
// valid whenever sum_i g_i vanishes at the evaluation point, together with
// its specializations (g_i = c_i g, r = 2, the power and exponential
// families) and two companion identities.
//
// Every verifier returns a VerificationReport. Inputs are brought to the
// mode of the evaluation point (or of beta for the combinatorial families):
// exact values may be widened to float, never the other way round.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "derivid/combinatorics.hpp"
#include "derivid/error.hpp"
#include "derivid/expr.hpp"
#include "derivid/jet.hpp"
#include "derivid/scalar.hpp"

namespace derivid {

enum class IdentityId {
  theorem1,
  corollary2,
  symmetric_pair,
  baran,
  leibniz_product,
  power_family,
  exp_family,
  zero_power_lemma,
};

inline constexpr IdentityId kAllIdentities[] = {
    IdentityId::theorem1,        IdentityId::corollary2,
    IdentityId::symmetric_pair,  IdentityId::baran,
    IdentityId::leibniz_product, IdentityId::power_family,
    IdentityId::exp_family,      IdentityId::zero_power_lemma,
};

inline std::string_view identity_name(IdentityId id) {
  switch (id) {
    case IdentityId::theorem1: return "theorem1";
    case IdentityId::corollary2: return "corollary2";
    case IdentityId::symmetric_pair: return "symmetric_pair";
    case IdentityId::baran: return "baran";
    case IdentityId::leibniz_product: return "leibniz_product";
    case IdentityId::power_family: return "power_family";
    case IdentityId::exp_family: return "exp_family";
    case IdentityId::zero_power_lemma: return "zero_power_lemma";
  }
  return "?";
}

inline std::optional<IdentityId> identity_from_name(std::string_view name) {
  for (IdentityId id : kAllIdentities) {
    if (identity_name(id) == name) return id;
  }
  return std::nullopt;
}

enum class Verdict { pass, fail, precondition_violated };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::precondition_violated: return "precondition_violated";
  }
  return "?";
}

/// Right-hand side used by exp_family_check.
enum class RhsForm { corrected, as_printed };

/// Parameter echo: a single value or a list, stored as text.
using ParamValue = std::variant<std::string, std::vector<std::string>>;

struct VerificationReport {
  IdentityId identity = IdentityId::theorem1;
  std::vector<std::pair<std::string, ParamValue>> params;
  Mode mode = Mode::exact;
  std::optional<Scalar> lhs;
  std::optional<Scalar> rhs;
  std::optional<Scalar> residual;
  /// Sum of absolute values of the LHS summands.
  std::optional<Scalar> cancellation_scale;
  /// Relative tolerance; only meaningful in float mode.
  double tolerance = 1e-9;
  /// Checks besides lhs == rhs (lower-order derivatives in the lemma).
  bool side_checks_passed = true;
  Verdict verdict = Verdict::precondition_violated;
  std::vector<std::string> notes;
};

struct VerifyOptions {
  double tolerance = 1e-9;
};

/// Pointwise tolerance for hypothesis checks in float mode.
inline constexpr double kHypothesisTolerance = 1e-12;

namespace detail {

inline std::vector<std::string> texts(const std::vector<Expr>& es) {
  std::vector<std::string> out;
  for (const auto& e : es) out.push_back(e.str());
  return out;
}
inline std::vector<std::string> texts(const std::vector<Scalar>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v.pretty());
  return out;
}
inline std::vector<std::string> texts(const MultiIndex& k) {
  std::vector<std::string> out;
  for (unsigned v : k) out.push_back(std::to_string(v));
  return out;
}

inline std::vector<Scalar> to_mode(const std::vector<Scalar>& vs, Mode m) {
  std::vector<Scalar> out;
  for (const auto& v : vs) out.push_back(v.to_mode(m));
  return out;
}

/// Whether `value` counts as zero: exactly, or relative to `scale` in float.
inline bool vanishes(const Scalar& value, const Scalar& scale, double tol) {
  if (value.is_exact()) return value.is_zero();
  return std::abs(value.as_double()) <= tol * std::max(1.0, scale.as_double());
}

/// Fills residual and verdict from lhs, rhs and cancellation_scale.
inline void decide(VerificationReport& r) {
  r.residual = *r.lhs - *r.rhs;
  const bool ok = vanishes(*r.residual, *r.cancellation_scale, r.tolerance);
  r.verdict = ok && r.side_checks_passed ? Verdict::pass : Verdict::fail;
}

inline VerificationReport start(IdentityId id, Mode mode, const VerifyOptions& opt) {
  VerificationReport r;
  r.identity = id;
  r.mode = mode;
  r.tolerance = opt.tolerance;
  return r;
}

struct Sum {
  Scalar value;
  Scalar scale;
};

/// sum over |k| = n of multinomial(n, k) * prod_i table[i][k_i], with the
/// running sum of absolute values of the summands.
inline Sum multinomial_sum(unsigned n, const std::vector<std::vector<Scalar>>& table,
                           Mode mode) {
  Sum out{Scalar::of_mode(mode, 0), Scalar::of_mode(mode, 0)};
  for (const MultiIndex& k : compositions(n, table.size())) {
    Scalar term = multinomial(n, k).to_mode(mode);
    for (std::size_t i = 0; i < table.size() && !term.is_zero(); ++i) {
      term *= table[i][k[i]];
    }
    out.value += term;
    out.scale += abs(term);
  }
  return out;
}

inline void check_lengths(std::size_t r, std::initializer_list<std::pair<const char*, std::size_t>> lists) {
  if (r == 0) throw StructuralError("r must be at least 1");
  for (const auto& [name, size] : lists) {
    if (size != r) {
      throw StructuralError(std::string(name) + " has " + std::to_string(size) +
                            " entries, expected r = " + std::to_string(r));
    }
  }
}

inline void check_s_bound(const MultiIndex& s, unsigned n) {
  if (s.total() > n) {
    throw DomainError("|s| = " + std::to_string(s.total()) + " exceeds n = " +
                      std::to_string(n) + "; no closed form is claimed there");
  }
}

}  // namespace detail

/// All inputs of one instance of the general multi-function identity.
struct TheoremInstance {
  unsigned n = 0;
  std::vector<Expr> f;
  std::vector<Expr> g;
  MultiIndex s;
  Scalar x0;

  std::size_t r() const { return f.size(); }
};

inline VerificationReport theorem1_verify(const TheoremInstance& inst,
                                          const VerifyOptions& opt = {}) {
  const std::size_t r = inst.r();
  detail::check_lengths(r, {{"g", inst.g.size()}, {"s", inst.s.size()}});
  detail::check_s_bound(inst.s, inst.n);
  const Mode mode = inst.x0.mode();
  auto rep = detail::start(IdentityId::theorem1, mode, opt);
  rep.params = {{"n", std::to_string(inst.n)},
                {"r", std::to_string(r)},
                {"f", detail::texts(inst.f)},
                {"g", detail::texts(inst.g)},
                {"s", detail::texts(inst.s)},
                {"x0", inst.x0.pretty()}};

  const unsigned order = std::max(inst.n, 1u);
  std::vector<Jet> gj;
  Scalar gsum = Scalar::of_mode(mode, 0);
  Scalar gabs = Scalar::of_mode(mode, 0);
  for (const auto& g : inst.g) {
    gj.push_back(eval_jet(g, inst.x0, order));
    gsum += gj.back()[0];
    gabs += abs(gj.back()[0]);
  }
  if (!detail::vanishes(gsum, gabs, kHypothesisTolerance)) {
    rep.verdict = Verdict::precondition_violated;
    rep.notes.push_back("sum of g_i at x0 is " + gsum.pretty() + ", not 0");
    return rep;
  }

  std::vector<std::vector<Scalar>> table(r);
  Scalar f_product = Scalar::of_mode(mode, 1);
  Scalar slope_product = Scalar::of_mode(mode, 1);
  for (std::size_t i = 0; i < r; ++i) {
    Jet term = eval_jet(inst.f[i], inst.x0, order);
    f_product *= term[0];
    slope_product *= pow(gj[i][1], inst.s[i]);
    for (unsigned k = 0; k <= inst.n; ++k) {
      table[i].push_back(term.derivative(inst.s[i]));
      term *= gj[i];
    }
  }
  auto sum = detail::multinomial_sum(inst.n, table, mode);
  rep.lhs = sum.value;
  rep.cancellation_scale = sum.scale;
  rep.rhs = inst.s.total() < inst.n
                ? Scalar::of_mode(mode, 0)
                : factorial(inst.n).to_mode(mode) * f_product * slope_product;
  detail::decide(rep);
  return rep;
}

inline VerificationReport corollary2_verify(unsigned n, const std::vector<Expr>& f,
                                            const Expr& g, const std::vector<Scalar>& c,
                                            const MultiIndex& s, const Scalar& x0,
                                            const VerifyOptions& opt = {}) {
  const std::size_t r = f.size();
  detail::check_lengths(r, {{"c", c.size()}, {"s", s.size()}});
  detail::check_s_bound(s, n);
  const Mode mode = x0.mode();
  const auto cm = detail::to_mode(c, mode);
  auto rep = detail::start(IdentityId::corollary2, mode, opt);
  rep.params = {{"n", std::to_string(n)},         {"r", std::to_string(r)},
                {"f", detail::texts(f)},          {"g", g.str()},
                {"c", detail::texts(cm)},         {"s", detail::texts(s)},
                {"x0", x0.pretty()}};

  Scalar csum = Scalar::of_mode(mode, 0);
  Scalar cabs = Scalar::of_mode(mode, 0);
  for (const auto& ci : cm) {
    csum += ci;
    cabs += abs(ci);
  }
  if (!detail::vanishes(csum, cabs, kHypothesisTolerance)) {
    rep.verdict = Verdict::precondition_violated;
    rep.notes.push_back("sum of c_i is " + csum.pretty() + ", not 0");
    return rep;
  }

  const unsigned order = std::max(n, 1u);
  const Jet gj = eval_jet(g, x0, order);
  std::vector<std::vector<Scalar>> table(r);
  Scalar f_product = Scalar::of_mode(mode, 1);
  Scalar c_product = Scalar::of_mode(mode, 1);
  for (std::size_t i = 0; i < r; ++i) {
    Jet term = eval_jet(f[i], x0, order);
    f_product *= term[0];
    c_product *= pow(cm[i], s[i]);
    Scalar c_power = Scalar::of_mode(mode, 1);
    for (unsigned k = 0; k <= n; ++k) {
      table[i].push_back(c_power * term.derivative(s[i]));
      term *= gj;
      c_power *= cm[i];
    }
  }
  auto sum = detail::multinomial_sum(n, table, mode);
  rep.lhs = sum.value;
  rep.cancellation_scale = sum.scale;
  rep.rhs = s.total() < n ? Scalar::of_mode(mode, 0)
                          : factorial(n).to_mode(mode) * c_product * f_product *
                                pow(gj[1], s.total());
  detail::decide(rep);
  return rep;
}

/// r = 2, c = (-1, 1), s = (p, n - p).
inline VerificationReport symmetric_pair_verify(unsigned n, unsigned p, const Expr& f1,
                                                const Expr& f2, const Expr& g,
                                                const Scalar& x0,
                                                const VerifyOptions& opt = {}) {
  if (p > n) {
    throw DomainError("p = " + std::to_string(p) + " must lie in 0..n = " +
                      std::to_string(n));
  }
  auto rep = corollary2_verify(n, {f1, f2}, g, {Scalar::integer(-1), Scalar::integer(1)},
                               MultiIndex{p, n - p}, x0, opt);
  rep.identity = IdentityId::symmetric_pair;
  rep.params = {{"n", std::to_string(n)}, {"p", std::to_string(p)},
                {"f1", f1.str()},         {"f2", f2.str()},
                {"g", g.str()},           {"x0", x0.pretty()}};
  return rep;
}

/// (1/n!) sum_k (-1)^k C(n,k) g^k (f g^{n-k})^{(n)} = f (g')^n; the factor
/// g^k is not differentiated.
inline VerificationReport baran_verify(unsigned n, const Expr& f, const Expr& g,
                                       const Scalar& x0, const VerifyOptions& opt = {}) {
  const Mode mode = x0.mode();
  auto rep = detail::start(IdentityId::baran, mode, opt);
  rep.params = {{"n", std::to_string(n)},
                {"f", f.str()},
                {"g", g.str()},
                {"x0", x0.pretty()}};
  const unsigned order = std::max(n, 1u);
  const Jet fj = eval_jet(f, x0, order);
  const Jet gj = eval_jet(g, x0, order);

  // (f g^j)^{(n)} for j = 0..n
  std::vector<Scalar> inner;
  Jet term = fj;
  for (unsigned j = 0; j <= n; ++j) {
    inner.push_back(term.derivative(n));
    term *= gj;
  }
  Scalar sum = Scalar::of_mode(mode, 0);
  Scalar scale = Scalar::of_mode(mode, 0);
  Scalar g_power = Scalar::of_mode(mode, 1);
  for (unsigned k = 0; k <= n; ++k) {
    Scalar t = binomial(n, k).to_mode(mode) * g_power * inner[n - k];
    if (k % 2 == 1) t = -t;
    sum += t;
    scale += abs(t);
    g_power *= gj[0];
  }
  const Scalar nf = factorial(n).to_mode(mode);
  rep.lhs = sum / nf;
  rep.cancellation_scale = scale / nf;
  rep.rhs = fj[0] * pow(gj[1], n);
  detail::decide(rep);
  return rep;
}

/// x sum_k C(n,k) (x^k f)^{(k)} (x^{n-k} g)^{(n-k)} = (x^{n+1} f g)^{(n)}.
inline VerificationReport leibniz_product_verify(unsigned n, const Expr& f, const Expr& g,
                                                 const Scalar& x0,
                                                 const VerifyOptions& opt = {}) {
  const Mode mode = x0.mode();
  auto rep = detail::start(IdentityId::leibniz_product, mode, opt);
  rep.params = {{"n", std::to_string(n)},
                {"f", f.str()},
                {"g", g.str()},
                {"x0", x0.pretty()}};
  const Jet xj = Jet::variable(x0, n);
  const Jet fj = eval_jet(f, x0, n);
  const Jet gj = eval_jet(g, x0, n);

  std::vector<Jet> xf{fj};
  std::vector<Jet> xg{gj};
  for (unsigned k = 1; k <= n; ++k) {
    xf.push_back(xj * xf.back());
    xg.push_back(xj * xg.back());
  }
  Scalar sum = Scalar::of_mode(mode, 0);
  Scalar scale = Scalar::of_mode(mode, 0);
  for (unsigned k = 0; k <= n; ++k) {
    const Scalar t = binomial(n, k).to_mode(mode) * xf[k].derivative(k) *
                     xg[n - k].derivative(n - k);
    sum += t;
    scale += abs(t);
  }
  rep.lhs = x0 * sum;
  rep.cancellation_scale = abs(x0) * scale;
  rep.rhs = (xj * xf[n] * gj).derivative(n);
  detail::decide(rep);
  return rep;
}

namespace detail {

struct FamilyInputs {
  Mode mode;
  std::vector<Scalar> alpha;
  Scalar beta;
  std::vector<Scalar> c;
};

inline FamilyInputs family_inputs(unsigned n, const std::vector<Scalar>& alpha,
                                  const Scalar& beta, const std::vector<Scalar>& c,
                                  const MultiIndex& s) {
  check_lengths(alpha.size(), {{"c", c.size()}, {"s", s.size()}});
  if (s.total() != n) {
    throw DomainError("|s| = " + std::to_string(s.total()) + " must equal n = " +
                      std::to_string(n));
  }
  const Mode mode = beta.mode();
  return {mode, to_mode(alpha, mode), beta, to_mode(c, mode)};
}

inline std::optional<std::string> family_hypothesis(const FamilyInputs& in) {
  Scalar csum = Scalar::of_mode(in.mode, 0);
  Scalar cabs = Scalar::of_mode(in.mode, 0);
  for (const auto& ci : in.c) {
    csum += ci;
    cabs += abs(ci);
  }
  if (vanishes(csum, cabs, kHypothesisTolerance)) return std::nullopt;
  return "sum of c_i is " + csum.pretty() + ", not 0";
}

inline Scalar c_power_product(const FamilyInputs& in, const MultiIndex& s) {
  Scalar out = Scalar::of_mode(in.mode, 1);
  for (std::size_t i = 0; i < in.c.size(); ++i) out *= pow(in.c[i], s[i]);
  return out;
}

inline std::vector<std::pair<std::string, ParamValue>> family_params(
    unsigned n, const FamilyInputs& in, const MultiIndex& s) {
  return {{"n", std::to_string(n)},
          {"r", std::to_string(in.alpha.size())},
          {"alpha", texts(in.alpha)},
          {"beta", in.beta.pretty()},
          {"c", texts(in.c)},
          {"s", texts(s)}};
}

}  // namespace detail

/// sum_{|k|=n} C(n;k) prod_i c_i^{k_i} C(alpha_i + k_i beta, s_i)
///   = C(n; s) beta^n prod_i c_i^{s_i}, evaluated without any jets.
inline VerificationReport power_family_check(unsigned n, const std::vector<Scalar>& alpha,
                                             const Scalar& beta, const std::vector<Scalar>& c,
                                             const MultiIndex& s,
                                             const VerifyOptions& opt = {}) {
  const auto in = detail::family_inputs(n, alpha, beta, c, s);
  auto rep = detail::start(IdentityId::power_family, in.mode, opt);
  rep.params = detail::family_params(n, in, s);
  if (auto why = detail::family_hypothesis(in)) {
    rep.verdict = Verdict::precondition_violated;
    rep.notes.push_back(*why);
    return rep;
  }
  std::vector<std::vector<Scalar>> table(in.alpha.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    Scalar c_power = Scalar::of_mode(in.mode, 1);
    for (unsigned k = 0; k <= n; ++k) {
      table[i].push_back(c_power *
                         generalized_binomial(in.alpha[i] + in.beta * std::int64_t{k}, s[i]));
      c_power *= in.c[i];
    }
  }
  auto sum = detail::multinomial_sum(n, table, in.mode);
  rep.lhs = sum.value;
  rep.cancellation_scale = sum.scale;
  rep.rhs = multinomial(n, s).to_mode(in.mode) * pow(in.beta, n) *
            detail::c_power_product(in, s);
  detail::decide(rep);
  return rep;
}

/// sum_{|k|=n} C(n;k) prod_i c_i^{k_i} (alpha_i + k_i beta)^{s_i} against
/// either n! beta^n prod c^s (corrected) or C(n; s) beta^n prod c^s
/// (as printed). Both values are carried in the notes.
inline VerificationReport exp_family_check(unsigned n, const std::vector<Scalar>& alpha,
                                           const Scalar& beta, const std::vector<Scalar>& c,
                                           const MultiIndex& s,
                                           RhsForm form = RhsForm::corrected,
                                           const VerifyOptions& opt = {}) {
  const auto in = detail::family_inputs(n, alpha, beta, c, s);
  auto rep = detail::start(IdentityId::exp_family, in.mode, opt);
  rep.params = detail::family_params(n, in, s);
  rep.params.emplace_back("rhs_form",
                          form == RhsForm::corrected ? "corrected" : "as_printed");
  if (auto why = detail::family_hypothesis(in)) {
    rep.verdict = Verdict::precondition_violated;
    rep.notes.push_back(*why);
    return rep;
  }
  std::vector<std::vector<Scalar>> table(in.alpha.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    Scalar c_power = Scalar::of_mode(in.mode, 1);
    for (unsigned k = 0; k <= n; ++k) {
      table[i].push_back(c_power * pow(in.alpha[i] + in.beta * std::int64_t{k}, s[i]));
      c_power *= in.c[i];
    }
  }
  auto sum = detail::multinomial_sum(n, table, in.mode);
  const Scalar tail = pow(in.beta, n) * detail::c_power_product(in, s);
  const Scalar corrected = factorial(n).to_mode(in.mode) * tail;
  const Scalar printed = multinomial(n, s).to_mode(in.mode) * tail;
  rep.lhs = sum.value;
  rep.cancellation_scale = sum.scale;
  rep.rhs = form == RhsForm::corrected ? corrected : printed;
  if (form == RhsForm::as_printed) {
    rep.notes.push_back(
        "as_printed RHS multinomial(n,s)*beta^n*prod(c^s) is inconsistent with the "
        "r = 2 closed form (-1)^s n! beta^n and with substituting f_i = exp(alpha_i x), "
        "g = exp(beta x) at x = 0, which give n!*beta^n*prod(c^s) = " +
        corrected.pretty());
  } else if (!(corrected == printed)) {
    rep.notes.push_back("as_printed multinomial RHS would be " + printed.pretty());
  }
  detail::decide(rep);
  return rep;
}

/// If f(x0) = 0 then (f^n)^{(s)}(x0) = 0 for s < n and
/// (f^n)^{(n)}(x0) = n! f'(x0)^n.
inline VerificationReport zero_power_lemma_check(const Expr& f, unsigned n,
                                                 const Scalar& x0,
                                                 const VerifyOptions& opt = {}) {
  const Mode mode = x0.mode();
  auto rep = detail::start(IdentityId::zero_power_lemma, mode, opt);
  rep.params = {{"f", f.str()}, {"n", std::to_string(n)}, {"x0", x0.pretty()}};
  const Jet fj = eval_jet(f, x0, std::max(n, 1u));
  if (!detail::vanishes(fj[0], Scalar::of_mode(mode, 1), kHypothesisTolerance)) {
    rep.verdict = Verdict::precondition_violated;
    rep.notes.push_back("f(x0) is " + fj[0].pretty() + ", not 0");
    return rep;
  }
  const Jet power = pow(fj, n);
  std::vector<Scalar> lower;
  Scalar scale = Scalar::of_mode(mode, 0);
  for (unsigned s = 0; s < n; ++s) {
    lower.push_back(power.derivative(s));
    scale += abs(lower.back());
  }
  rep.lhs = power.derivative(n);
  scale += abs(*rep.lhs);
  rep.cancellation_scale = scale;
  rep.rhs = factorial(n).to_mode(mode) * pow(fj[1], n);
  std::string listing = "lower-order derivatives of f^n at x0:";
  for (const auto& d : lower) {
    listing += " " + d.pretty();
    if (!detail::vanishes(d, scale, rep.tolerance)) rep.side_checks_passed = false;
  }
  if (lower.empty()) listing += " (none)";
  rep.notes.push_back(listing);
  detail::decide(rep);
  return rep;
}

/// Shifts the RHS by `delta` and recomputes residual and verdict. Used to
/// confirm a verifier is sensitive to a wrong closed form.
inline VerificationReport perturb_rhs(VerificationReport rep, const Scalar& delta) {
  if (!rep.rhs) return rep;
  rep.rhs = *rep.rhs + delta.to_mode(rep.mode);
  rep.notes.push_back("rhs perturbed by " + delta.pretty());
  detail::decide(rep);
  return rep;
}

}  // namespace derivid
