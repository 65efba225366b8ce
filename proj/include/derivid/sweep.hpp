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

#pragma once

#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "derivid/identities.hpp"

namespace derivid {

/// splitmix64 finalizer; derives independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Instance generator on top of mt19937_64. Draws use plain modular
/// reduction so streams are identical across standard libraries.
class InstanceRng {
 public:
  explicit InstanceRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  /// p/q with |p| <= bound and 1 <= q <= bound.
  Scalar rational(std::int64_t bound) {
    const auto num = uniform(-bound, bound);
    const auto den = uniform(1, std::max<std::int64_t>(bound, 1));
    return Scalar::ratio(num, den);
  }

  /// Polynomial of degree <= degree with random rational coefficients.
  Expr polynomial(unsigned degree, std::int64_t bound) {
    std::vector<Scalar> coeffs;
    const auto d = static_cast<unsigned>(uniform(0, degree));
    for (unsigned j = 0; j <= d; ++j) coeffs.push_back(rational(bound));
    return polynomial_expr(coeffs);
  }

  /// Random k with |k| = total, r entries.
  MultiIndex composition(unsigned total, std::size_t r) {
    std::vector<unsigned> k(r, 0);
    for (unsigned u = 0; u < total; ++u) {
      ++k[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(r) - 1))];
    }
    return MultiIndex(std::move(k));
  }

  /// sum_j c_j x^j with raw (parseable) nodes.
  static Expr polynomial_expr(const std::vector<Scalar>& coeffs) {
    Expr out = constant(coeffs[0]);
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
      out = out + constant(coeffs[j]) * pow_int(var(), static_cast<std::int64_t>(j));
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

struct SweepConfig {
  std::uint64_t seed = 0;
  unsigned trials = 10;
  unsigned max_n = 4;
  unsigned max_r = 3;
  std::int64_t coeff_bound = 5;
  unsigned degree_bound = 3;
  std::vector<IdentityId> identities{IdentityId::theorem1};
  /// Negative-test mode: break the hypothesis of each instance (identities
  /// without a hypothesis get their RHS shifted by 1 instead).
  bool perturb = false;
  /// Worker threads; results do not depend on this.
  unsigned workers = 1;
};

struct SweepSummary {
  SweepConfig config;
  std::map<IdentityId, std::map<Verdict, unsigned>> counts;
  unsigned passed = 0;
  unsigned failed = 0;
  unsigned precondition_violated = 0;
  /// Exact-mode residuals of all evaluated reports were 0/1.
  bool all_residuals_zero = true;
  std::optional<std::pair<unsigned, VerificationReport>> first_failure;
};

namespace detail {

inline std::vector<Scalar> zero_sum_weights(InstanceRng& rng, std::size_t r,
                                            std::int64_t bound, bool perturb) {
  std::vector<Scalar> c;
  Scalar sum = Scalar::integer(0);
  for (std::size_t i = 0; i + 1 < r; ++i) {
    c.push_back(rng.rational(bound));
    sum += c.back();
  }
  c.push_back(-sum + (perturb ? 1 : 0));
  return c;
}

inline VerificationReport run_trial(const SweepConfig& cfg, unsigned trial) {
  InstanceRng rng(mix_seed(cfg.seed ^ mix_seed(trial)));
  const IdentityId id = cfg.identities[trial % cfg.identities.size()];
  const auto n = static_cast<unsigned>(rng.uniform(0, cfg.max_n));
  const auto r = static_cast<std::size_t>(
      rng.uniform(std::min<unsigned>(2, cfg.max_r), std::max<unsigned>(cfg.max_r, 1)));
  const Scalar x0 = rng.rational(cfg.coeff_bound);
  auto poly = [&] { return rng.polynomial(cfg.degree_bound, cfg.coeff_bound); };
  auto poly_list = [&](std::size_t count) {
    std::vector<Expr> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(poly());
    return out;
  };
  auto shift = [&](VerificationReport rep) {
    return cfg.perturb ? perturb_rhs(std::move(rep), Scalar::integer(1)) : rep;
  };

  switch (id) {
    case IdentityId::theorem1: {
      TheoremInstance inst;
      inst.n = n;
      inst.f = poly_list(r);
      inst.g = poly_list(r - 1);
      Expr last = constant(cfg.perturb ? 1 : 0);
      for (const auto& g : inst.g) last = last - g;
      inst.g.push_back(last);
      inst.s = rng.composition(static_cast<unsigned>(rng.uniform(0, n)), r);
      inst.x0 = x0;
      return theorem1_verify(inst);
    }
    case IdentityId::corollary2: {
      auto f = poly_list(r);
      auto g = poly();
      auto c = zero_sum_weights(rng, r, cfg.coeff_bound, cfg.perturb);
      auto s = rng.composition(static_cast<unsigned>(rng.uniform(0, n)), r);
      return corollary2_verify(n, f, g, c, s, x0);
    }
    case IdentityId::symmetric_pair: {
      const auto p = static_cast<unsigned>(rng.uniform(0, n));
      auto f1 = poly();
      auto f2 = poly();
      auto g = poly();
      return shift(symmetric_pair_verify(n, p, f1, f2, g, x0));
    }
    case IdentityId::baran: {
      auto f = poly();
      auto g = poly();
      return shift(baran_verify(n, f, g, x0));
    }
    case IdentityId::leibniz_product: {
      auto f = poly();
      auto g = poly();
      return shift(leibniz_product_verify(n, f, g, x0));
    }
    case IdentityId::power_family:
    case IdentityId::exp_family: {
      std::vector<Scalar> alpha;
      for (std::size_t i = 0; i < r; ++i) alpha.push_back(rng.rational(cfg.coeff_bound));
      const Scalar beta = rng.rational(cfg.coeff_bound);
      auto c = zero_sum_weights(rng, r, cfg.coeff_bound, cfg.perturb);
      auto s = rng.composition(n, r);
      if (id == IdentityId::power_family) return power_family_check(n, alpha, beta, c, s);
      return exp_family_check(n, alpha, beta, c, s);
    }
    case IdentityId::zero_power_lemma: {
      // f = (x - x0) h(x), so f(x0) = 0 by construction.
      Expr f = (var() - constant(x0)) * poly();
      if (cfg.perturb) f = f + constant(1);
      return zero_power_lemma_check(f, n, x0);
    }
  }
  throw StructuralError("unknown identity");
}

}  // namespace detail

/// Runs cfg.trials seeded random instances. Trial t draws from its own
/// stream seeded by mix_seed(seed ^ mix_seed(t)), so the summary is the same
/// for any worker count.
inline SweepSummary sweep(const SweepConfig& cfg) {
  if (cfg.trials == 0) throw DomainError("sweep needs at least one trial");
  if (cfg.identities.empty()) throw DomainError("sweep needs at least one identity");
  std::vector<std::optional<VerificationReport>> reports(cfg.trials);
  const unsigned workers = std::clamp(cfg.workers, 1u, cfg.trials);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (unsigned t = w; t < cfg.trials; t += workers) {
            reports[t] = detail::run_trial(cfg, t);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepSummary out;
  out.config = cfg;
  for (unsigned t = 0; t < cfg.trials; ++t) {
    const VerificationReport& rep = *reports[t];
    ++out.counts[rep.identity][rep.verdict];
    switch (rep.verdict) {
      case Verdict::pass: ++out.passed; break;
      case Verdict::fail: ++out.failed; break;
      case Verdict::precondition_violated: ++out.precondition_violated; break;
    }
    if (rep.residual && rep.mode == Mode::exact && !rep.residual->is_zero()) {
      out.all_residuals_zero = false;
    }
    if (rep.verdict != Verdict::pass && !out.first_failure) {
      out.first_failure.emplace(t, rep);
    }
  }
  return out;
}

}  // namespace derivid
