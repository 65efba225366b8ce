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

// Command-line front end.
//
//   derivid verify <identity> [flags]
//   derivid binomid <eq4|eq5|eq6|eq7> [flags]
//   derivid lemma --f F --n N --at X
//   derivid sweep [--seed S --trials T ...]
//
// Exit codes: 0 every verification passed, 1 some verdict was fail or
// precondition_violated, 2 usage, parse or evaluation error.

#pragma once

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "derivid/identities.hpp"
#include "derivid/parse.hpp"
#include "derivid/report.hpp"
#include "derivid/sweep.hpp"

namespace derivid::cli {

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

struct Flags {
  std::optional<std::string> n, r, p, s, c, alpha, beta, f, g, f1, f2, at, tol,
      rhs_form, perturb_rhs;
  bool float_mode = false;
  bool json = false;
  // sweep
  std::uint64_t seed = 0;
  unsigned trials = 10;
  unsigned max_n = 4;
  unsigned max_r = 3;
  std::int64_t coeff_bound = 5;
  unsigned degree_bound = 3;
  unsigned workers = 1;
  std::string identities = "theorem1";
  bool perturb = false;
};

inline std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(item);
  if (!text.empty() && text.back() == ',') out.emplace_back();
  return out;
}

inline const std::string& need(const std::optional<std::string>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required flag ") + flag);
  return *v;
}

/// Turns the parsed command line into typed values. Tracks whether any
/// decimal literal forced float mode.
class Reader {
 public:
  explicit Reader(const Flags& flags) : flags_(flags), float_(flags.float_mode) {}

  bool float_mode() const { return float_; }
  Mode mode() const { return float_ ? Mode::float64 : Mode::exact; }
  std::vector<std::string>& notes() { return notes_; }

  Expr expr(const char* flag, const std::string& text, std::size_t index = 0,
            bool in_list = false) {
    try {
      Expr e = parse(text);
      if (has_float_constant(e)) force_float(flag, text);
      return e;
    } catch (const ParseError& err) {
      std::string where = std::string(flag);
      if (in_list) where += " expression #" + std::to_string(index + 1);
      throw UsageError(where + " \"" + text + "\": parse error at offset " +
                       std::to_string(err.offset()) + " (column " +
                       std::to_string(err.offset() + 1) + "): expected " +
                       err.expected() + ", found " + err.found());
    }
  }

  std::vector<Expr> expr_list(const char* flag, const std::string& text) {
    std::vector<Expr> out;
    const auto items = split(text);
    for (std::size_t i = 0; i < items.size(); ++i) {
      out.push_back(expr(flag, items[i], i, true));
    }
    return out;
  }

  Scalar number(const char* flag, const std::string& text) {
    Expr e = expr(flag, text);
    auto* c = as<node::Const>(e);
    if (!c) throw UsageError(std::string(flag) + ": expected a number, got \"" + text + "\"");
    return c->value;
  }

  std::vector<Scalar> number_list(const char* flag, const std::string& text) {
    std::vector<Scalar> out;
    for (const auto& item : split(text)) out.push_back(number(flag, item));
    return out;
  }

  static unsigned count(const char* flag, const std::string& text) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(text, &used);
      if (used != text.size() || v < 0 || v > 1000000) throw std::invalid_argument(text);
      return static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
      throw UsageError(std::string(flag) + ": expected a non-negative integer, got \"" +
                       text + "\"");
    }
  }

  static MultiIndex index_list(const char* flag, const std::string& text) {
    std::vector<unsigned> k;
    for (const auto& item : split(text)) k.push_back(count(flag, item));
    return MultiIndex(std::move(k));
  }

  VerifyOptions options() const {
    VerifyOptions opt;
    if (flags_.tol) {
      try {
        opt.tolerance = std::stod(*flags_.tol);
      } catch (const std::logic_error&) {
        throw UsageError("--tol: expected a number, got \"" + *flags_.tol + "\"");
      }
      if (!(opt.tolerance >= 0)) throw UsageError("--tol must be non-negative");
    }
    return opt;
  }

  void check_r(std::size_t r) const {
    if (flags_.r && count("--r", *flags_.r) != r) {
      throw UsageError("--r " + *flags_.r + " does not match the list length " +
                       std::to_string(r));
    }
  }

 private:
  void force_float(const char* flag, const std::string& text) {
    if (!float_) {
      notes_.push_back(std::string("decimal literal in ") + flag + " \"" + text +
                       "\" forces float mode");
    }
    float_ = true;
  }

  const Flags& flags_;
  bool float_;
  std::vector<std::string> notes_;
};

inline RhsForm rhs_form(const Flags& flags) {
  if (!flags.rhs_form || *flags.rhs_form == "corrected") return RhsForm::corrected;
  if (*flags.rhs_form == "as_printed") return RhsForm::as_printed;
  throw UsageError("--rhs-form must be 'corrected' or 'as_printed', got '" +
                   *flags.rhs_form + "'");
}

inline std::vector<Scalar> in_mode(std::vector<Scalar> v, Mode m) {
  for (auto& x : v) x = x.to_mode(m);
  return v;
}

inline void expect_len(const char* flag, std::size_t got, std::size_t want) {
  if (got != want) {
    throw UsageError(std::string(flag) + " has " + std::to_string(got) +
                     " entries, expected " + std::to_string(want));
  }
}

/// Runs the identity named `which` and returns its report.
inline VerificationReport dispatch_verify(const std::string& which, const Flags& fl,
                                          Reader& rd) {
  auto id = identity_from_name(which);
  if (!id) throw UsageError("unknown identity '" + which + "'");
  const auto opt = rd.options();

  // Parse everything first so decimal literals anywhere switch the mode
  // before numbers are converted.
  switch (*id) {
    case IdentityId::theorem1: {
      TheoremInstance inst;
      inst.n = Reader::count("--n", need(fl.n, "--n"));
      inst.s = Reader::index_list("--s", need(fl.s, "--s"));
      inst.f = rd.expr_list("--f", need(fl.f, "--f"));
      inst.g = rd.expr_list("--g", need(fl.g, "--g"));
      inst.x0 = rd.number("--at", need(fl.at, "--at"));
      rd.check_r(inst.f.size());
      expect_len("--g", inst.g.size(), inst.f.size());
      expect_len("--s", inst.s.size(), inst.f.size());
      inst.x0 = inst.x0.to_mode(rd.mode());
      return theorem1_verify(inst, opt);
    }
    case IdentityId::corollary2: {
      const unsigned n = Reader::count("--n", need(fl.n, "--n"));
      const auto s = Reader::index_list("--s", need(fl.s, "--s"));
      const auto f = rd.expr_list("--f", need(fl.f, "--f"));
      const auto g = rd.expr("--g", need(fl.g, "--g"));
      auto c = rd.number_list("--c", need(fl.c, "--c"));
      auto x0 = rd.number("--at", need(fl.at, "--at"));
      rd.check_r(f.size());
      expect_len("--c", c.size(), f.size());
      expect_len("--s", s.size(), f.size());
      return corollary2_verify(n, f, g, in_mode(c, rd.mode()), s, x0.to_mode(rd.mode()),
                               opt);
    }
    case IdentityId::symmetric_pair: {
      const unsigned n = Reader::count("--n", need(fl.n, "--n"));
      const unsigned p = Reader::count("--p", need(fl.p, "--p"));
      const auto f1 = rd.expr("--f1", need(fl.f1, "--f1"));
      const auto f2 = rd.expr("--f2", need(fl.f2, "--f2"));
      const auto g = rd.expr("--g", need(fl.g, "--g"));
      auto x0 = rd.number("--at", need(fl.at, "--at"));
      if (p > n) throw UsageError("--p must lie in 0..n");
      return symmetric_pair_verify(n, p, f1, f2, g, x0.to_mode(rd.mode()), opt);
    }
    case IdentityId::baran:
    case IdentityId::leibniz_product: {
      const unsigned n = Reader::count("--n", need(fl.n, "--n"));
      const auto f = rd.expr("--f", need(fl.f, "--f"));
      const auto g = rd.expr("--g", need(fl.g, "--g"));
      const auto x0 = rd.number("--at", need(fl.at, "--at")).to_mode(rd.mode());
      return *id == IdentityId::baran ? baran_verify(n, f, g, x0, opt)
                                      : leibniz_product_verify(n, f, g, x0, opt);
    }
    case IdentityId::power_family:
    case IdentityId::exp_family: {
      const unsigned n = Reader::count("--n", need(fl.n, "--n"));
      const auto s = Reader::index_list("--s", need(fl.s, "--s"));
      auto alpha = rd.number_list("--alpha", need(fl.alpha, "--alpha"));
      auto beta = rd.number("--beta", need(fl.beta, "--beta"));
      auto c = rd.number_list("--c", need(fl.c, "--c"));
      rd.check_r(alpha.size());
      expect_len("--c", c.size(), alpha.size());
      expect_len("--s", s.size(), alpha.size());
      if (s.total() != n) throw UsageError("--s must sum to --n for this identity");
      const Mode m = rd.mode();
      if (*id == IdentityId::power_family) {
        return power_family_check(n, in_mode(alpha, m), beta.to_mode(m), in_mode(c, m), s,
                                  opt);
      }
      return exp_family_check(n, in_mode(alpha, m), beta.to_mode(m), in_mode(c, m), s,
                              rhs_form(fl), opt);
    }
    case IdentityId::zero_power_lemma: {
      const auto f = rd.expr("--f", need(fl.f, "--f"));
      const unsigned n = Reader::count("--n", need(fl.n, "--n"));
      auto x0 = rd.number("--at", need(fl.at, "--at"));
      return zero_power_lemma_check(f, n, x0.to_mode(rd.mode()), opt);
    }
  }
  throw UsageError("unknown identity '" + which + "'");
}

/// eq4/eq6 take the general family flags; eq5/eq7 are the r = 2 forms with
/// c = (-1, 1) and a single --s giving s = (s, n - s).
inline VerificationReport dispatch_binomid(const std::string& eq, Flags fl, Reader& rd) {
  if (eq == "eq4") return dispatch_verify("power_family", fl, rd);
  if (eq == "eq6") return dispatch_verify("exp_family", fl, rd);
  if (eq != "eq5" && eq != "eq7") {
    throw UsageError("binomid expects eq4, eq5, eq6 or eq7, got '" + eq + "'");
  }
  const unsigned n = Reader::count("--n", need(fl.n, "--n"));
  const unsigned s = Reader::count("--s", need(fl.s, "--s"));
  if (s > n) throw UsageError("--s must lie in 0..n");
  fl.s = std::to_string(s) + "," + std::to_string(n - s);
  if (fl.c && split(*fl.c).size() != 2) throw UsageError("--c must have 2 entries");
  if (!fl.c) fl.c = "-1,1";
  if (fl.alpha) expect_len("--alpha", split(*fl.alpha).size(), 2);
  return dispatch_verify(eq == "eq5" ? "power_family" : "exp_family", fl, rd);
}

inline std::vector<IdentityId> identity_list(const std::string& text) {
  std::vector<IdentityId> out;
  for (const auto& name : split(text)) {
    if (name == "all") {
      out.assign(std::begin(kAllIdentities), std::end(kAllIdentities));
      continue;
    }
    auto id = identity_from_name(name);
    if (!id) throw UsageError("--identities: unknown identity '" + name + "'");
    out.push_back(*id);
  }
  if (out.empty()) throw UsageError("--identities must name at least one identity");
  return out;
}

inline void add_verify_flags(CLI::App* app, Flags& f) {
  app->add_option("--n", f.n, "order n");
  app->add_option("--r", f.r, "number of functions (checked against list lengths)");
  app->add_option("--p", f.p, "split p in 0..n (symmetric_pair)");
  app->add_option("--s", f.s, "derivative orders, comma-separated");
  app->add_option("--c", f.c, "weights c_i, comma-separated");
  app->add_option("--alpha", f.alpha, "alpha_i, comma-separated");
  app->add_option("--beta", f.beta, "beta");
  app->add_option("--f", f.f, "f or f_1,...,f_r");
  app->add_option("--g", f.g, "g or g_1,...,g_r");
  app->add_option("--f1", f.f1, "f_1 (symmetric_pair)");
  app->add_option("--f2", f.f2, "f_2 (symmetric_pair)");
  app->add_option("--at", f.at, "evaluation point x0");
  app->add_option("--tol", f.tol, "float-mode relative tolerance (default 1e-9)");
  app->add_option("--rhs-form", f.rhs_form, "corrected | as_printed (exp family)");
  app->add_option("--perturb-rhs", f.perturb_rhs, "add this value to the RHS");
  app->add_flag("--float", f.float_mode, "evaluate in double precision");
  app->add_flag("--json", f.json, "emit JSON");
}

inline int finish(const VerificationReport& raw, const Flags& fl, Reader& rd,
                  std::ostream& out) {
  VerificationReport rep = raw;
  if (fl.perturb_rhs) rep = perturb_rhs(rep, rd.number("--perturb-rhs", *fl.perturb_rhs));
  for (auto& note : rd.notes()) rep.notes.insert(rep.notes.begin(), note);
  emit_report(out, rep, fl.json ? Format::json : Format::text);
  return rep.verdict == Verdict::pass ? 0 : 1;
}

}  // namespace detail

/// Entry point; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate both sides of higher-order derivative identities", "derivid"};
  app.require_subcommand(1);
  detail::Flags fl;

  std::string which;
  auto* verify = app.add_subcommand("verify", "verify one identity instance");
  verify->add_option("identity", which, "theorem1 | corollary2 | symmetric_pair | baran | "
                                        "leibniz_product | power_family | exp_family | "
                                        "zero_power_lemma")
      ->required();
  detail::add_verify_flags(verify, fl);

  std::string eq;
  auto* binomid = app.add_subcommand("binomid", "binomial-coefficient corollaries");
  binomid->add_option("equation", eq, "eq4 | eq5 | eq6 | eq7")->required();
  detail::add_verify_flags(binomid, fl);

  auto* lemma = app.add_subcommand("lemma", "powers of a function vanishing at x0");
  detail::add_verify_flags(lemma, fl);

  auto* sweep_cmd = app.add_subcommand("sweep", "seeded random instances");
  sweep_cmd->add_option("--seed", fl.seed, "RNG seed (default 0)");
  sweep_cmd->add_option("--trials", fl.trials, "number of instances (default 10)");
  sweep_cmd->add_option("--identities", fl.identities,
                        "comma-separated identities or 'all' (default theorem1)");
  sweep_cmd->add_option("--max-n", fl.max_n, "largest n (default 4)");
  sweep_cmd->add_option("--max-r", fl.max_r, "largest r (default 3)");
  sweep_cmd->add_option("--coeff-bound", fl.coeff_bound, "rational coefficient bound");
  sweep_cmd->add_option("--degree-bound", fl.degree_bound, "polynomial degree bound");
  sweep_cmd->add_option("--workers", fl.workers, "worker threads (default 1)");
  sweep_cmd->add_flag("--perturb", fl.perturb, "break every instance (negative test)");
  sweep_cmd->add_flag("--json", fl.json, "accepted for symmetry; output is always JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    detail::Reader rd(fl);
    if (verify->parsed()) {
      return detail::finish(detail::dispatch_verify(which, fl, rd), fl, rd, out);
    }
    if (binomid->parsed()) {
      return detail::finish(detail::dispatch_binomid(eq, fl, rd), fl, rd, out);
    }
    if (lemma->parsed()) {
      return detail::finish(detail::dispatch_verify("zero_power_lemma", fl, rd), fl, rd, out);
    }
    if (fl.trials == 0) throw UsageError("--trials must be at least 1");
    if (fl.coeff_bound < 1) throw UsageError("--coeff-bound must be at least 1");
    SweepConfig cfg;
    cfg.seed = fl.seed;
    cfg.trials = fl.trials;
    cfg.max_n = fl.max_n;
    cfg.max_r = std::max(fl.max_r, 1u);
    cfg.coeff_bound = fl.coeff_bound;
    cfg.degree_bound = fl.degree_bound;
    cfg.identities = detail::identity_list(fl.identities);
    cfg.perturb = fl.perturb;
    cfg.workers = std::max(fl.workers, 1u);
    const SweepSummary summary = sweep(cfg);
    out << sweep_json(summary).dump(2) << '\n';
    return summary.passed == summary.config.trials ? 0 : 1;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace derivid::cli
