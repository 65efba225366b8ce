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

#include <ostream>
#include <string>

#include "json.hpp"

#include "derivid/identities.hpp"
#include "derivid/sweep.hpp"

namespace derivid {

enum class Format { text, json };

using Json = nlohmann::ordered_json;

namespace detail {

inline Json scalar_json(const std::optional<Scalar>& s) {
  if (!s) return nullptr;
  return s->str();
}

inline Json param_json(const ParamValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

inline std::string param_text(const ParamValue& v) {
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  std::string out;
  for (const auto& x : std::get<std::vector<std::string>>(v)) {
    if (!out.empty()) out += ", ";
    out += x;
  }
  return "[" + out + "]";
}

}  // namespace detail

/// Field order is fixed:
/// identity, params, mode, lhs, rhs, residual, cancellation_scale,
/// tolerance, verdict, notes.
inline Json report_json(const VerificationReport& r) {
  Json params = Json::object();
  for (const auto& [name, value] : r.params) params[name] = detail::param_json(value);
  Json j;
  j["identity"] = identity_name(r.identity);
  j["params"] = std::move(params);
  j["mode"] = mode_name(r.mode);
  j["lhs"] = detail::scalar_json(r.lhs);
  j["rhs"] = detail::scalar_json(r.rhs);
  j["residual"] = detail::scalar_json(r.residual);
  j["cancellation_scale"] = detail::scalar_json(r.cancellation_scale);
  j["tolerance"] = r.mode == Mode::float64 ? Json(format_double(r.tolerance)) : Json(nullptr);
  j["verdict"] = verdict_name(r.verdict);
  j["notes"] = r.notes;
  return j;
}

inline void emit_report(std::ostream& os, const VerificationReport& r, Format format) {
  if (format == Format::json) {
    os << report_json(r).dump(2) << '\n';
    return;
  }
  auto value = [](const std::optional<Scalar>& s) {
    return s ? (s->is_exact() ? s->pretty() : s->str()) : std::string("-");
  };
  os << "identity: " << identity_name(r.identity) << '\n';
  for (const auto& [name, v] : r.params) {
    os << "  " << name << " = " << detail::param_text(v) << '\n';
  }
  os << "mode: " << mode_name(r.mode);
  if (r.mode == Mode::float64) os << " (tol " << format_double(r.tolerance) << ")";
  os << '\n';
  os << "lhs: " << value(r.lhs) << '\n';
  os << "rhs: " << value(r.rhs) << '\n';
  os << "residual: " << (r.residual ? r.residual->str() : std::string("-")) << '\n';
  os << "cancellation scale: " << value(r.cancellation_scale) << '\n';
  for (const auto& note : r.notes) os << "note: " << note << '\n';
  os << "verdict: " << verdict_name(r.verdict) << '\n';
}

inline Json sweep_json(const SweepSummary& s) {
  Json ids = Json::array();
  for (IdentityId id : s.config.identities) ids.push_back(identity_name(id));
  Json config;
  config["seed"] = s.config.seed;
  config["trials"] = s.config.trials;
  config["max_n"] = s.config.max_n;
  config["max_r"] = s.config.max_r;
  config["coeff_bound"] = s.config.coeff_bound;
  config["degree_bound"] = s.config.degree_bound;
  config["identities"] = std::move(ids);
  config["perturb"] = s.config.perturb;

  Json per = Json::object();
  for (const auto& [id, counts] : s.counts) {
    Json c;
    for (Verdict v : {Verdict::pass, Verdict::fail, Verdict::precondition_violated}) {
      auto it = counts.find(v);
      c[std::string(verdict_name(v))] = it == counts.end() ? 0u : it->second;
    }
    per[std::string(identity_name(id))] = std::move(c);
  }

  Json j;
  j["config"] = std::move(config);
  j["pass"] = s.passed;
  j["fail"] = s.failed;
  j["precondition_violated"] = s.precondition_violated;
  j["all_residuals_zero"] = s.all_residuals_zero;
  j["per_identity"] = std::move(per);
  if (s.first_failure) {
    Json ff;
    ff["trial"] = s.first_failure->first;
    ff["report"] = report_json(s.first_failure->second);
    j["first_failure"] = std::move(ff);
  } else {
    j["first_failure"] = nullptr;
  }
  return j;
}

}  // namespace derivid
