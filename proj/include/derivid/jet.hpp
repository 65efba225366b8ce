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
#include <string>
#include <vector>

#include "derivid/combinatorics.hpp"
#include "derivid/error.hpp"
#include "derivid/scalar.hpp"

namespace derivid {

/// Truncated Taylor expansion of a function at a point x0.
///
/// coeffs()[k] holds f^(k)(x0) / k!, so products are plain Cauchy products.
/// A jet of order n has exactly n + 1 coefficients, all in one scalar mode.
class Jet {
 public:
  /// Constant jet `value` of the given order.
  static Jet constant(const Scalar& value, unsigned order) {
    std::vector<Scalar> c(order + 1, Scalar::of_mode(value.mode(), 0));
    c[0] = value;
    return Jet(std::move(c));
  }

  /// Jet of the identity function at x0: [x0, 1, 0, ..., 0].
  static Jet variable(const Scalar& x0, unsigned order) {
    Jet out = constant(x0, order);
    if (order >= 1) out.coeffs_[1] = Scalar::of_mode(x0.mode(), 1);
    return out;
  }

  /// Takes ownership of normalized coefficients. Throws StructuralError on an
  /// empty vector and ModeError if the modes differ.
  explicit Jet(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw StructuralError("jet needs at least one coefficient");
    for (const auto& c : coeffs_) {
      if (c.mode() != coeffs_[0].mode()) {
        throw ModeError("jet coefficients mix exact and float values");
      }
    }
  }

  unsigned order() const { return static_cast<unsigned>(coeffs_.size() - 1); }
  Mode mode() const { return coeffs_[0].mode(); }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  const Scalar& operator[](std::size_t k) const { return coeffs_[k]; }
  const Scalar& value() const { return coeffs_[0]; }

  /// k! * coeffs[k], the k-th derivative at the expansion point.
  Scalar derivative(unsigned k) const {
    if (k > order()) {
      throw OrderError("derivative of order " + std::to_string(k) +
                       " requested from a jet of order " +
                       std::to_string(order()));
    }
    return coeffs_[k] * factorial(k).to_mode(mode());
  }

  Jet operator-() const {
    std::vector<Scalar> c;
    c.reserve(coeffs_.size());
    for (const auto& x : coeffs_) c.push_back(-x);
    return Jet(std::move(c));
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    check_order(a, b, "+");
    std::vector<Scalar> c;
    c.reserve(a.coeffs_.size());
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) {
      c.push_back(a.coeffs_[k] + b.coeffs_[k]);
    }
    return Jet(std::move(c));
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    check_order(a, b, "-");
    std::vector<Scalar> c;
    c.reserve(a.coeffs_.size());
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) {
      c.push_back(a.coeffs_[k] - b.coeffs_[k]);
    }
    return Jet(std::move(c));
  }
  friend Jet operator*(const Scalar& s, const Jet& a) {
    std::vector<Scalar> c;
    c.reserve(a.coeffs_.size());
    for (const auto& x : a.coeffs_) c.push_back(s * x);
    return Jet(std::move(c));
  }
  friend Jet operator*(const Jet& a, const Scalar& s) { return s * a; }

  /// Cauchy product truncated at the common order.
  friend Jet operator*(const Jet& a, const Jet& b) {
    check_order(a, b, "*");
    const unsigned n = a.order();
    std::vector<Scalar> c;
    c.reserve(n + 1);
    for (unsigned k = 0; k <= n; ++k) {
      Scalar sum = a.coeffs_[0] * b.coeffs_[k];
      for (unsigned j = 1; j <= k; ++j) sum += a.coeffs_[j] * b.coeffs_[k - j];
      c.push_back(std::move(sum));
    }
    return Jet(std::move(c));
  }

  /// Series quotient. b[0] must be non-zero.
  friend Jet operator/(const Jet& a, const Jet& b) {
    check_order(a, b, "/");
    if (b.coeffs_[0].is_zero()) {
      throw DomainError("jet division: divisor vanishes at the expansion point");
    }
    const unsigned n = a.order();
    std::vector<Scalar> c;
    c.reserve(n + 1);
    for (unsigned k = 0; k <= n; ++k) {
      Scalar sum = a.coeffs_[k];
      for (unsigned j = 1; j <= k; ++j) sum -= b.coeffs_[j] * c[k - j];
      c.push_back(sum / b.coeffs_[0]);
    }
    return Jet(std::move(c));
  }

  Jet& operator+=(const Jet& b) { return *this = *this + b; }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }

  friend bool operator==(const Jet&, const Jet&) = default;

  std::string str() const {
    std::string out = "[";
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (k) out += ", ";
      out += coeffs_[k].pretty();
    }
    return out + "]";
  }

 private:
  static void check_order(const Jet& a, const Jet& b, const char* op) {
    if (a.order() != b.order()) {
      throw StructuralError(std::string("jet order mismatch in '") + op +
                            "': " + std::to_string(a.order()) + " vs " +
                            std::to_string(b.order()));
    }
  }

  std::vector<Scalar> coeffs_;
};

/// a^m by square-and-multiply; a^0 is the constant-one jet.
inline Jet pow(const Jet& a, unsigned m) {
  Jet result = Jet::constant(Scalar::of_mode(a.mode(), 1), a.order());
  Jet base = a;
  while (m > 0) {
    if (m & 1) result *= base;
    m >>= 1;
    if (m > 0) base *= base;
  }
  return result;
}

// Elementary functions via the usual first-order recurrences on normalized
// coefficients. The leading value goes through the scalar functions, so in
// exact mode they succeed only where that value is rational.

inline Jet exp(const Jet& a) {
  const unsigned n = a.order();
  std::vector<Scalar> b;
  b.reserve(n + 1);
  b.push_back(exp(a[0]));
  for (unsigned k = 1; k <= n; ++k) {
    Scalar sum = Scalar::of_mode(a.mode(), 0);
    for (unsigned j = 1; j <= k; ++j) sum += j * a[j] * b[k - j];
    b.push_back(sum / std::int64_t{k});
  }
  return Jet(std::move(b));
}

inline Jet log(const Jet& a) {
  const unsigned n = a.order();
  std::vector<Scalar> b;
  b.reserve(n + 1);
  b.push_back(log(a[0]));
  for (unsigned k = 1; k <= n; ++k) {
    Scalar sum = Scalar::of_mode(a.mode(), 0);
    for (unsigned j = 1; j < k; ++j) sum += j * b[j] * a[k - j];
    b.push_back((a[k] - sum / std::int64_t{k}) / a[0]);
  }
  return Jet(std::move(b));
}

namespace detail {

struct SinCos {
  std::vector<Scalar> sin;
  std::vector<Scalar> cos;
};

inline SinCos sin_cos(const Jet& a) {
  const unsigned n = a.order();
  SinCos out;
  out.sin.push_back(sin(a[0]));
  out.cos.push_back(cos(a[0]));
  for (unsigned k = 1; k <= n; ++k) {
    Scalar s = Scalar::of_mode(a.mode(), 0);
    Scalar c = Scalar::of_mode(a.mode(), 0);
    for (unsigned j = 1; j <= k; ++j) {
      s += j * a[j] * out.cos[k - j];
      c -= j * a[j] * out.sin[k - j];
    }
    out.sin.push_back(s / std::int64_t{k});
    out.cos.push_back(c / std::int64_t{k});
  }
  return out;
}

}  // namespace detail

inline Jet sin(const Jet& a) { return Jet(detail::sin_cos(a).sin); }
inline Jet cos(const Jet& a) { return Jet(detail::sin_cos(a).cos); }

inline Jet sqrt(const Jet& a) {
  if (a[0].sign() <= 0) {
    throw DomainError("jet sqrt: value " + a[0].str() +
                      " at the expansion point is not positive");
  }
  const unsigned n = a.order();
  std::vector<Scalar> b;
  b.reserve(n + 1);
  b.push_back(sqrt(a[0]));
  for (unsigned k = 1; k <= n; ++k) {
    Scalar sum = a[k];
    for (unsigned j = 1; j < k; ++j) sum -= b[j] * b[k - j];
    b.push_back(sum / (2 * b[0]));
  }
  return Jet(std::move(b));
}

/// a^alpha for a real exponent. Integer alpha uses pow / division; otherwise
/// a[0] must be positive and the (1+u)^alpha recurrence is applied.
inline Jet pow_real(const Jet& a, const Scalar& alpha) {
  if (alpha.is_integer()) {
    auto m = alpha.to_int64();
    if (!m || *m > std::int64_t{1} << 20 || *m < -(std::int64_t{1} << 20)) {
      throw DomainError("jet power: exponent " + alpha.str() + " out of range");
    }
    if (*m >= 0) return pow(a, static_cast<unsigned>(*m));
    const Jet one = Jet::constant(Scalar::of_mode(a.mode(), 1), a.order());
    return one / pow(a, static_cast<unsigned>(-*m));
  }
  if (a[0].sign() <= 0) {
    throw DomainError("jet power: value " + a[0].str() +
                      " at the expansion point is not positive for exponent " +
                      alpha.str());
  }
  const unsigned n = a.order();
  std::vector<Scalar> b;
  b.reserve(n + 1);
  b.push_back(pow_real(a[0], alpha));
  for (unsigned k = 1; k <= n; ++k) {
    Scalar sum = Scalar::of_mode(a.mode(), 0);
    for (unsigned j = 1; j <= k; ++j) {
      sum += (alpha * std::int64_t{j} - std::int64_t{k - j}) * a[j] * b[k - j];
    }
    b.push_back(sum / (std::int64_t{k} * a[0]));
  }
  return Jet(std::move(b));
}

enum class Elementary { exp, log, sin, cos, sqrt };

inline std::string_view elementary_name(Elementary fn) {
  switch (fn) {
    case Elementary::exp: return "exp";
    case Elementary::log: return "log";
    case Elementary::sin: return "sin";
    case Elementary::cos: return "cos";
    case Elementary::sqrt: return "sqrt";
  }
  return "?";
}

inline Jet apply(Elementary fn, const Jet& a) {
  switch (fn) {
    case Elementary::exp: return exp(a);
    case Elementary::log: return log(a);
    case Elementary::sin: return sin(a);
    case Elementary::cos: return cos(a);
    case Elementary::sqrt: return sqrt(a);
  }
  throw StructuralError("unknown elementary function");
}

inline Scalar apply(Elementary fn, const Scalar& a) {
  switch (fn) {
    case Elementary::exp: return exp(a);
    case Elementary::log: return log(a);
    case Elementary::sin: return sin(a);
    case Elementary::cos: return cos(a);
    case Elementary::sqrt: return sqrt(a);
  }
  throw StructuralError("unknown elementary function");
}

}  // namespace derivid
