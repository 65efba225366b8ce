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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "derivid/identities.hpp"
#include "derivid/parse.hpp"
#include "derivid/sweep.hpp"

namespace derivid {
namespace {

Scalar q(std::int64_t num, std::int64_t den = 1) { return Scalar::ratio(num, den); }
Expr P(std::string_view text) { return parse(text); }

BigInt fact(unsigned n) {
  BigInt out = 1;
  for (unsigned i = 2; i <= n; ++i) out *= i;
  return out;
}

// Brute-force LHS of the multi-function identity: every product f_i g_i^{k_i}
// is differentiated symbolically and evaluated, no jets involved.
Scalar theorem_lhs_oracle(const TheoremInstance& inst) {
  const std::size_t r = inst.r();
  Scalar sum = q(0);
  std::vector<unsigned> k(r, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == r) {
      k[i] = left;
      BigInt coef = fact(inst.n);
      for (unsigned v : k) coef /= fact(v);
      Scalar term(coef);
      for (std::size_t j = 0; j < r; ++j) {
        const Expr prod = inst.f[j] * pow_int(inst.g[j], k[j]);
        term *= nth_derivative_oracle(prod, inst.s[j], inst.x0);
      }
      sum += term;
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      k[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, inst.n);
  return sum;
}

TheoremInstance spot_instance(MultiIndex s) {
  TheoremInstance inst;
  inst.n = 2;
  inst.f = {P("1"), P("x")};
  inst.g = {P("-x^2"), P("x^2")};
  inst.s = std::move(s);
  inst.x0 = q(3);
  return inst;
}

TEST(Theorem1, SpotValue) {
  const auto inst = spot_instance({0, 2});
  // By hand: sum = 20x^3 - 12x^3 + 0 = 8x^3, at x = 3 that is 216.
  EXPECT_EQ(theorem_lhs_oracle(inst), q(216));
  const auto rep = theorem1_verify(inst);
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_EQ(*rep.lhs, q(216));
  EXPECT_EQ(*rep.rhs, q(216));
  EXPECT_EQ(rep.residual->str(), "0/1");
  EXPECT_FALSE(*rep.cancellation_scale < abs(*rep.lhs));
}

TEST(Theorem1, LowOrderCaseIsZero) {
  const auto rep = theorem1_verify(spot_instance({0, 1}));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_EQ(*rep.lhs, q(0));
  EXPECT_EQ(*rep.rhs, q(0));
  EXPECT_EQ(theorem_lhs_oracle(spot_instance({0, 1})), q(0));
}

TEST(Theorem1, HypothesisChecked) {
  TheoremInstance inst = spot_instance({0, 2});
  inst.g = {P("x^2"), P("x^2")};
  inst.x0 = q(1);
  const auto rep = theorem1_verify(inst);
  EXPECT_EQ(rep.verdict, Verdict::precondition_violated);
  EXPECT_FALSE(rep.lhs.has_value());
  EXPECT_FALSE(rep.rhs.has_value());
}

TEST(Theorem1, PointwiseHypothesisSuffices) {
  // g_1 + g_2 = x - 2 vanishes only at x0 = 2.
  TheoremInstance inst;
  inst.n = 3;
  inst.f = {P("x^2 + 1"), P("3 - x")};
  inst.g = {P("x^3 - 7"), P("-x^3 + x + 5")};
  inst.x0 = q(2);
  for (unsigned total = 0; total <= 3; ++total) {
    for (const auto& s : compositions(total, 2)) {
      inst.s = s;
      const auto rep = theorem1_verify(inst);
      EXPECT_EQ(rep.verdict, Verdict::pass) << s.str();
      EXPECT_EQ(*rep.lhs, theorem_lhs_oracle(inst));
    }
  }
}

TEST(Theorem1, StructuralErrors) {
  TheoremInstance inst = spot_instance({0, 2});
  inst.s = {0, 3};
  EXPECT_THROW(theorem1_verify(inst), DomainError);  // |s| > n
  inst.s = {0, 1, 1};
  EXPECT_THROW(theorem1_verify(inst), StructuralError);
  inst = spot_instance({0, 2});
  inst.g.pop_back();
  EXPECT_THROW(theorem1_verify(inst), StructuralError);
}

TEST(Theorem1, FloatModeUsesScaledTolerance) {
  TheoremInstance inst;
  inst.n = 3;
  inst.f = {P("exp(x)"), P("cos(x)"), P("1")};
  inst.g = {P("sin(x)"), P("x^2"), P("-sin(x) - x^2")};
  inst.x0 = Scalar(0.4);
  inst.s = {1, 1, 1};
  const auto rep = theorem1_verify(inst);
  EXPECT_EQ(rep.mode, Mode::float64);
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_LE(std::abs(rep.residual->as_double()),
            1e-9 * std::max(1.0, rep.cancellation_scale->as_double()));
}

// Every polynomial instance with n <= 5, r <= 3 and every s with |s| <= n
// has residual exactly 0/1; LHS also checked against the symbolic oracle.
TEST(Theorem1Property, ExactZeroResidual) {
  InstanceRng rng(5);
  for (unsigned n = 0; n <= 5; ++n) {
    for (std::size_t r = 1; r <= 3; ++r) {
      TheoremInstance inst;
      inst.n = n;
      Expr last = constant(0);
      for (std::size_t i = 0; i < r; ++i) {
        inst.f.push_back(rng.polynomial(3, 4));
        if (i + 1 < r) {
          inst.g.push_back(rng.polynomial(3, 4));
          last = last - inst.g.back();
        }
      }
      inst.g.push_back(last);
      inst.x0 = rng.rational(4);
      for (unsigned total = 0; total <= n; ++total) {
        for (const auto& s : compositions(total, r)) {
          inst.s = s;
          const auto rep = theorem1_verify(inst);
          ASSERT_EQ(rep.residual->str(), "0/1") << "n=" << n << " s=" << s.str();
          if (n <= 3) EXPECT_EQ(*rep.lhs, theorem_lhs_oracle(inst));
        }
      }
    }
  }
}

TEST(Corollary2, ReducesToTheoremSpotValue) {
  const auto rep = corollary2_verify(2, {P("1"), P("x")}, P("x^2"), {q(-1), q(1)},
                                     {0, 2}, q(3));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_EQ(*rep.lhs, q(216));
}

TEST(Corollary2, ThreeFunctions) {
  const std::vector<Expr> f{P("x"), P("1"), P("1")};
  const std::vector<Scalar> c{q(1), q(1), q(-2)};
  const auto rep = corollary2_verify(2, f, P("x^2"), c, {1, 1, 0}, q(1));
  // Oracle: the same sum with g_i = c_i g through the symbolic route.
  TheoremInstance inst;
  inst.n = 2;
  inst.f = f;
  inst.g = {P("x^2"), P("x^2"), P("-2*x^2")};
  inst.s = {1, 1, 0};
  inst.x0 = q(1);
  EXPECT_EQ(theorem_lhs_oracle(inst), q(8));
  EXPECT_EQ(*rep.lhs, q(8));
  EXPECT_EQ(*rep.rhs, q(8));
  EXPECT_EQ(rep.verdict, Verdict::pass);
}

TEST(Corollary2, LowOrderIsZeroAndHypothesis) {
  const auto rep = corollary2_verify(3, {P("x+1"), P("x^2")}, P("x^3 - x"),
                                     {q(2, 3), q(-2, 3)}, {1, 1}, q(5, 2));
  EXPECT_EQ(*rep.lhs, q(0));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  const auto bad = corollary2_verify(2, {P("1"), P("x")}, P("x^2"), {q(-1), q(2)},
                                     {0, 2}, q(3));
  EXPECT_EQ(bad.verdict, Verdict::precondition_violated);
}

TEST(Corollary2Property, MatchesTheoremWithScaledG) {
  InstanceRng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const unsigned n = static_cast<unsigned>(rng.uniform(0, 4));
    const std::size_t r = static_cast<std::size_t>(rng.uniform(1, 3));
    std::vector<Expr> f;
    for (std::size_t i = 0; i < r; ++i) f.push_back(rng.polynomial(3, 4));
    const Expr g = rng.polynomial(3, 4);
    std::vector<Scalar> c;
    Scalar sum = q(0);
    for (std::size_t i = 0; i + 1 < r; ++i) {
      c.push_back(rng.rational(4));
      sum += c.back();
    }
    c.push_back(-sum);
    const MultiIndex s = rng.composition(static_cast<unsigned>(rng.uniform(0, n)), r);
    const Scalar x0 = rng.rational(4);

    TheoremInstance inst{n, f, {}, s, x0};
    for (const auto& ci : c) inst.g.push_back(constant(ci) * g);
    const auto a = corollary2_verify(n, f, g, c, s, x0);
    const auto b = theorem1_verify(inst);
    EXPECT_EQ(*a.lhs, *b.lhs);
    EXPECT_EQ(*a.rhs, *b.rhs);
    EXPECT_EQ(a.verdict, Verdict::pass);
  }
}

TEST(SymmetricPair, Examples) {
  auto rep = symmetric_pair_verify(1, 1, P("1"), P("1"), P("x^2"), q(5));
  EXPECT_EQ(*rep.lhs, q(-10));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  rep = symmetric_pair_verify(2, 0, P("1"), P("x"), P("x^2"), q(3));
  EXPECT_EQ(*rep.lhs, q(216));
  EXPECT_EQ(rep.identity, IdentityId::symmetric_pair);
  rep = symmetric_pair_verify(0, 0, P("x+1"), P("x^2"), P("x^3"), q(2));
  EXPECT_EQ(*rep.lhs, q(12));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_THROW(symmetric_pair_verify(1, 2, P("1"), P("1"), P("x"), q(0)), DomainError);
}

TEST(Baran, Examples) {
  auto rep = baran_verify(2, P("x"), P("x^2"), q(3));
  EXPECT_EQ(*rep.lhs, q(108));
  EXPECT_EQ(*rep.rhs, q(108));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  // n = 1: (fg)' - g f' = f g'
  rep = baran_verify(1, P("x^3 - 1"), P("2*x + 7"), q(-2));
  EXPECT_EQ(*rep.lhs, eval_scalar(P("(x^3 - 1)*2"), q(-2)));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  rep = baran_verify(0, P("x^2 + 1/3"), P("x"), q(1, 2));
  EXPECT_EQ(*rep.lhs, q(7, 12));
  EXPECT_EQ(*rep.rhs, q(7, 12));
}

TEST(Baran, WrapperCoherence) {
  InstanceRng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const unsigned n = static_cast<unsigned>(rng.uniform(0, 5));
    const Expr f = rng.polynomial(3, 5), g = rng.polynomial(3, 5);
    const Scalar x0 = rng.rational(5);
    const auto b = baran_verify(n, f, g, x0);
    const auto s = symmetric_pair_verify(n, 0, constant(1), f, g, x0);
    EXPECT_EQ(*b.lhs * factorial(n), *s.lhs);
    EXPECT_EQ(b.verdict, Verdict::pass);
  }
}

TEST(LeibnizProduct, Examples) {
  auto rep = leibniz_product_verify(2, P("1"), P("1"), q(2));
  EXPECT_EQ(*rep.lhs, q(12));
  EXPECT_EQ(*rep.rhs, q(12));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  rep = leibniz_product_verify(0, P("x+2"), P("x^2"), q(3));
  EXPECT_EQ(*rep.lhs, eval_scalar(P("x*(x+2)*x^2"), q(3)));
  EXPECT_EQ(rep.verdict, Verdict::pass);
}

TEST(LeibnizProduct, FirstOrderAgainstOracle) {
  // x [f (x g)' + (x f)' g] = (x^2 f g)' by symbolic differentiation.
  const Expr f = P("x^3 - 2*x"), g = P("1/(x + 4)");
  const Scalar x0 = q(3, 7);
  const Scalar expected = nth_derivative_oracle(P("x^2") * f * g, 1, x0);
  const auto rep = leibniz_product_verify(1, f, g, x0);
  EXPECT_EQ(*rep.lhs, expected);
  EXPECT_EQ(*rep.rhs, expected);
}

TEST(LeibnizProduct, RandomFloatInstances) {
  const auto rep = leibniz_product_verify(4, P("sin(x)"), P("exp(-x)"), Scalar(1.3));
  EXPECT_EQ(rep.verdict, Verdict::pass);
}

TEST(PowerFamily, Examples) {
  auto rep = power_family_check(1, {q(0), q(0)}, q(2), {q(-1), q(1)}, {1, 0});
  EXPECT_EQ(*rep.lhs, q(-2));
  EXPECT_EQ(*rep.rhs, q(-2));
  rep = power_family_check(0, {q(3), q(1, 2)}, q(5), {q(-1), q(1)}, {0, 0});
  EXPECT_EQ(*rep.lhs, q(1));
  EXPECT_EQ(*rep.rhs, q(1));
  EXPECT_THROW(power_family_check(2, {q(0), q(0)}, q(1), {q(-1), q(1)}, {1, 0}),
               DomainError);
  rep = power_family_check(1, {q(0), q(0)}, q(2), {q(-1), q(2)}, {1, 0});
  EXPECT_EQ(rep.verdict, Verdict::precondition_violated);
}

TEST(PowerFamily, TwoFunctionFormAgainstDirectSum) {
  // sum_k (-1)^k C(n,k) C(a1 + k b, n) C(a2 + (n-k) b, 0), brute force.
  for (unsigned n = 0; n <= 6; ++n) {
    for (std::int64_t a1 : {-2, 0, 3}) {
      for (std::int64_t beta : {1, 2, -3}) {
        Scalar direct = q(0);
        for (unsigned k = 0; k <= n; ++k) {
          Scalar falling = q(1);
          for (unsigned j = 0; j < n; ++j) falling *= q(a1 + static_cast<std::int64_t>(k) * beta - j);
          Scalar t = Scalar(BigInt(fact(n) / (fact(k) * fact(n - k)))) * falling / Scalar(fact(n));
          direct += (k % 2 ? -t : t);
        }
        const auto rep = power_family_check(n, {q(a1), q(5)}, q(beta), {q(-1), q(1)}, {n, 0});
        EXPECT_EQ(*rep.lhs, direct);
        EXPECT_EQ(rep.verdict, Verdict::pass);
        EXPECT_EQ(*rep.rhs, pow(q(-beta), n));
      }
    }
  }
}

TEST(PowerFamily, AgreesWithCorollaryOnPowers) {
  // f_i = x^{a_i}, g = x^b at x0 = 1: each factor picks up s_i!.
  const std::vector<std::int64_t> a{2, 5, 1};
  const std::int64_t b = 2;
  const std::vector<Scalar> c{q(1), q(2), q(-3)};
  for (unsigned n = 0; n <= 3; ++n) {
    for (const auto& s : compositions(n, 3)) {
      std::vector<Expr> f;
      std::vector<Scalar> alpha;
      for (auto ai : a) {
        f.push_back(pow_int(var(), ai));
        alpha.push_back(q(ai));
      }
      const auto cor = corollary2_verify(n, f, pow_int(var(), b), c, s, q(1));
      const auto fam = power_family_check(n, alpha, q(b), c, s);
      Scalar weight = q(1);
      for (unsigned si : s) weight *= factorial(si);
      EXPECT_EQ(*cor.lhs, *fam.lhs * weight);
      EXPECT_EQ(fam.verdict, Verdict::pass);
    }
  }
}

TEST(ExpFamily, Examples) {
  auto rep = exp_family_check(2, {q(0), q(0)}, q(1), {q(-1), q(1)}, {1, 1});
  EXPECT_EQ(*rep.lhs, q(-2));
  EXPECT_EQ(*rep.rhs, q(-2));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  rep = exp_family_check(2, {q(0), q(0)}, q(1), {q(-1), q(1)}, {1, 1}, RhsForm::as_printed);
  EXPECT_EQ(rep.verdict, Verdict::pass);  // multinomial(2,(1,1)) = 2!

  rep = exp_family_check(2, {q(0), q(0)}, q(1), {q(-1), q(1)}, {2, 0});
  EXPECT_EQ(*rep.lhs, q(2));
  EXPECT_EQ(*rep.rhs, q(2));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  rep = exp_family_check(2, {q(0), q(0)}, q(1), {q(-1), q(1)}, {2, 0}, RhsForm::as_printed);
  EXPECT_EQ(*rep.lhs, q(2));
  EXPECT_EQ(*rep.rhs, q(1));
  EXPECT_EQ(rep.verdict, Verdict::fail);
  ASSERT_FALSE(rep.notes.empty());
  EXPECT_NE(rep.notes[0].find("inconsistent"), std::string::npos);

  rep = exp_family_check(0, {q(4), q(-1)}, q(7), {q(3), q(-3)}, {0, 0});
  EXPECT_EQ(*rep.lhs, q(1));
  EXPECT_EQ(*rep.rhs, q(1));
}

TEST(ExpFamily, AgreesWithCorollaryOnExponentials) {
  // f_i = exp(a_i x), g = exp(b x) at x0 = 0; exact because exp(0) = 1, and
  // again in float mode.
  const std::vector<Scalar> alpha{q(1, 2), q(-1), q(2)};
  const Scalar beta = q(3, 2);
  const std::vector<Scalar> c{q(1), q(1, 3), q(-4, 3)};
  std::vector<Expr> f;
  for (const auto& a : alpha) f.push_back(apply(Elementary::exp, constant(a) * var()));
  const Expr g = apply(Elementary::exp, constant(beta) * var());
  for (unsigned n = 0; n <= 4; ++n) {
    for (const auto& s : compositions(n, 3)) {
      const auto fam = exp_family_check(n, alpha, beta, c, s);
      EXPECT_EQ(fam.verdict, Verdict::pass);
      EXPECT_EQ(*corollary2_verify(n, f, g, c, s, q(0)).lhs, *fam.lhs);
      const auto flt = corollary2_verify(n, f, g, c, s, Scalar(0.0));
      EXPECT_NEAR(flt.lhs->as_double(), fam.lhs->as_double(),
                  1e-9 * std::max(1.0, flt.cancellation_scale->as_double()));
    }
  }
}

TEST(ZeroPowerLemma, Examples) {
  auto rep = zero_power_lemma_check(P("x - 3"), 3, q(3));
  EXPECT_EQ(*rep.lhs, q(6));
  EXPECT_EQ(*rep.rhs, q(6));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  // (x^2-1)^2 = x^4 - 2x^2 + 1; second derivative 12x^2 - 4 = 8 at 1.
  rep = zero_power_lemma_check(P("x^2 - 1"), 2, q(1));
  EXPECT_EQ(*rep.lhs, nth_derivative_oracle(P("x^4 - 2*x^2 + 1"), 2, q(1)));
  EXPECT_EQ(*rep.lhs, q(8));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  rep = zero_power_lemma_check(P("x"), 0, q(0));
  EXPECT_EQ(*rep.lhs, q(1));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  rep = zero_power_lemma_check(P("x - 2"), 2, q(3));
  EXPECT_EQ(rep.verdict, Verdict::precondition_violated);
}

TEST(Reduction, AlternatingPowerSums) {
  // sum_k (-1)^{n-k} C(n,k) k^i is 0 for i < n and n! for i = n.
  for (unsigned n = 0; n <= 10; ++n) {
    for (unsigned i = 0; i <= n; ++i) {
      Scalar sum = q(0);
      for (unsigned k = 0; k <= n; ++k) {
        Scalar t = binomial(n, k) * pow(q(k), i);
        sum += ((n - k) % 2 ? -t : t);
      }
      EXPECT_EQ(sum, i < n ? q(0) : factorial(n)) << n << " " << i;
    }
  }
}

TEST(NegativeSensitivity, RhsPerturbationFails) {
  InstanceRng rng(9);
  const auto base = baran_verify(3, P("x^2 + 1"), P("x - 5"), q(2));
  ASSERT_EQ(base.verdict, Verdict::pass);
  for (int i = 0; i < 50; ++i) {
    Scalar delta = rng.rational(1000);
    if (delta.is_zero()) continue;
    EXPECT_EQ(perturb_rhs(base, delta).verdict, Verdict::fail) << delta;
  }
  EXPECT_EQ(perturb_rhs(base, q(1, 1000)).verdict, Verdict::fail);
  const auto flt = baran_verify(3, P("sin(x)"), P("exp(x)"), Scalar(0.5));
  ASSERT_EQ(flt.verdict, Verdict::pass);
  EXPECT_EQ(perturb_rhs(flt, q(1, 1000)).verdict, Verdict::fail);
}

TEST(ZeroPowerLemma, SideChecksEnterVerdict) {
  // Side checks participate in the verdict even when lhs == rhs.
  auto rep = zero_power_lemma_check(P("x - 1"), 2, q(1));
  rep.side_checks_passed = false;
  EXPECT_EQ(perturb_rhs(rep, q(0)).verdict, Verdict::fail);
}

}  // namespace
}  // namespace derivid
