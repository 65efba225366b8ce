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

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>

#include "derivid/error.hpp"

namespace derivid {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Mode { exact, float64 };

inline std::string_view mode_name(Mode m) {
  return m == Mode::exact ? "exact" : "float";
}

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Coefficient ring of every computation: an arbitrary-precision rational
/// (always normalized, denominator positive) or a double. Binary operations
/// between the two modes throw ModeError. Machine integers combine with
/// either mode.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  explicit Scalar(Rational q) : value_(std::move(q)) {}
  explicit Scalar(const BigInt& z) : value_(Rational(z)) {}
  explicit Scalar(double d) : value_(d) {}
  static Scalar integer(std::int64_t v) { return Scalar(Rational(v)); }
  static Scalar ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("zero denominator in rational literal");
    if (den < 0) return Scalar(Rational(-BigInt(num), -BigInt(den)));
    return Scalar(Rational(num, den));
  }
  /// `v` expressed in mode `m`.
  static Scalar of_mode(Mode m, std::int64_t v) {
    return m == Mode::exact ? integer(v) : Scalar(static_cast<double>(v));
  }

  Mode mode() const {
    return std::holds_alternative<Rational>(value_) ? Mode::exact
                                                     : Mode::float64;
  }
  bool is_exact() const { return mode() == Mode::exact; }

  const Rational& rational() const {
    if (auto* q = std::get_if<Rational>(&value_)) return *q;
    throw ModeError("expected an exact rational, found float " +
                    format_double(std::get<double>(value_)));
  }
  double as_double() const {
    if (auto* q = std::get_if<Rational>(&value_)) {
      return static_cast<double>(*q);
    }
    return std::get<double>(value_);
  }
  /// Value converted to mode `m`. Converting a float to exact is an error.
  Scalar to_mode(Mode m) const {
    if (m == mode()) return *this;
    if (m == Mode::float64) return Scalar(as_double());
    throw ModeError("cannot convert float " + format_double(as_double()) +
                    " to an exact rational");
  }

  bool is_zero() const {
    return std::visit([](const auto& v) { return v == 0; }, value_);
  }
  bool is_one() const {
    return std::visit([](const auto& v) { return v == 1; }, value_);
  }
  int sign() const {
    return std::visit([](const auto& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); },
                      value_);
  }
  bool is_integer() const {
    if (auto* q = std::get_if<Rational>(&value_)) {
      return boost::multiprecision::denominator(*q) == 1;
    }
    return false;
  }
  /// Integer value of an exact integral scalar fitting in int64.
  std::optional<std::int64_t> to_int64() const {
    if (!is_integer()) return std::nullopt;
    const BigInt num = boost::multiprecision::numerator(rational());
    if (num > std::numeric_limits<std::int64_t>::max() ||
        num < std::numeric_limits<std::int64_t>::min()) {
      return std::nullopt;
    }
    return static_cast<std::int64_t>(num);
  }

  /// "p/q" for exact values, shortest round-trip decimal for floats.
  std::string str() const {
    if (auto* q = std::get_if<Rational>(&value_)) {
      return boost::multiprecision::numerator(*q).str() + "/" +
             boost::multiprecision::denominator(*q).str();
    }
    return format_double(std::get<double>(value_));
  }
  /// Like str() but integers print without the "/1".
  std::string pretty() const {
    if (is_integer()) return boost::multiprecision::numerator(rational()).str();
    return str();
  }

  Scalar operator-() const {
    if (auto* q = std::get_if<Rational>(&value_)) return Scalar(Rational(-*q));
    return Scalar(-std::get<double>(value_));
  }
  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    return combine(a, b, [](const auto& x, const auto& y) { return x / y; });
  }
  friend Scalar operator*(const Scalar& a, std::int64_t k) {
    return a * of_mode(a.mode(), k);
  }
  friend Scalar operator*(std::int64_t k, const Scalar& a) { return a * k; }
  friend Scalar operator/(const Scalar& a, std::int64_t k) {
    return a / of_mode(a.mode(), k);
  }
  friend Scalar operator+(const Scalar& a, std::int64_t k) {
    return a + of_mode(a.mode(), k);
  }
  friend Scalar operator-(const Scalar& a, std::int64_t k) {
    return a - of_mode(a.mode(), k);
  }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

  /// Same mode and same value. Exact 1/2 and float 0.5 are not equal.
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(const Scalar& a, const Scalar& b) {
    return combine_cmp(a, b);
  }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    return os << s.str();
  }

 private:
  template <typename Op>
  static Scalar combine(const Scalar& a, const Scalar& b, Op op) {
    if (a.mode() != b.mode()) {
      throw ModeError("mixed exact/float arithmetic: " + a.str() + " and " +
                      b.str());
    }
    if (a.is_exact()) return Scalar(Rational(op(a.rational(), b.rational())));
    return Scalar(static_cast<double>(
        op(std::get<double>(a.value_), std::get<double>(b.value_))));
  }
  static bool combine_cmp(const Scalar& a, const Scalar& b) {
    if (a.mode() != b.mode()) {
      throw ModeError("mixed exact/float comparison: " + a.str() + " and " +
                      b.str());
    }
    if (a.is_exact()) return a.rational() < b.rational();
    return std::get<double>(a.value_) < std::get<double>(b.value_);
  }

  std::variant<Rational, double> value_;
};

inline Scalar abs(const Scalar& s) { return s.sign() < 0 ? -s : s; }

/// a^m for any integer m; m < 0 requires a != 0. 0^0 = 1.
inline Scalar pow(const Scalar& a, std::int64_t m) {
  if (m < 0) return Scalar::of_mode(a.mode(), 1) / pow(a, -m);
  Scalar result = Scalar::of_mode(a.mode(), 1);
  Scalar base = a;
  while (m > 0) {
    if (m & 1) result *= base;
    m >>= 1;
    if (m > 0) base *= base;
  }
  return result;
}

namespace detail {

/// Exact q-th root of a non-negative integer, if it is a perfect power.
inline std::optional<BigInt> exact_integer_root(const BigInt& v, unsigned q) {
  if (v < 0) return std::nullopt;
  if (v < 2 || q == 1) return v;
  // Bisection on [0, 2^(bits/q + 1)].
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(v)) + 1;
  BigInt lo = 0;
  BigInt hi = BigInt(1) << (bits / q + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) >> 1;
    if (boost::multiprecision::pow(mid, q) <= v) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  if (boost::multiprecision::pow(lo, q) == v) return lo;
  return std::nullopt;
}

}  // namespace detail

/// base^alpha for real alpha. Integer exact alpha dispatches to pow().
/// Otherwise base must be positive; in exact mode the result must itself be
/// rational (a perfect power), else ModeError.
inline Scalar pow_real(const Scalar& base, const Scalar& alpha) {
  if (alpha.is_integer()) {
    auto m = alpha.to_int64();
    if (!m) throw DomainError("exponent " + alpha.str() + " out of range");
    if (*m < 0 && base.is_zero()) {
      throw DomainError("zero raised to negative power " + alpha.str());
    }
    return pow(base, *m);
  }
  if (base.sign() <= 0) {
    throw DomainError("non-positive base " + base.str() +
                      " raised to non-integer power " + alpha.str());
  }
  if (base.mode() != alpha.mode()) {
    throw ModeError("mixed exact/float power: " + base.str() + "^" +
                    alpha.str());
  }
  if (!base.is_exact()) return Scalar(std::pow(base.as_double(), alpha.as_double()));

  const Rational& a = alpha.rational();
  const BigInt p = boost::multiprecision::numerator(a);
  const BigInt q = boost::multiprecision::denominator(a);
  if (q > 64) {
    throw ModeError("exact root of order " + q.str() + " not supported");
  }
  const unsigned qi = static_cast<unsigned>(q);
  const Rational& b = base.rational();
  auto num = detail::exact_integer_root(boost::multiprecision::numerator(b), qi);
  auto den =
      detail::exact_integer_root(boost::multiprecision::denominator(b), qi);
  if (!num || !den) {
    throw ModeError(base.str() + "^" + alpha.str() +
                    " is irrational; use float mode");
  }
  const Scalar root(Rational(*num, *den));
  if (p > std::numeric_limits<std::int64_t>::max() ||
      p < std::numeric_limits<std::int64_t>::min()) {
    throw DomainError("exponent " + alpha.str() + " out of range");
  }
  return pow(root, static_cast<std::int64_t>(p));
}

// Elementary functions. Float mode evaluates directly. Exact mode succeeds
// only at the points where the value is rational (exp(0), log(1), sin(0),
// cos(0), sqrt of a perfect square) and throws ModeError elsewhere.

inline Scalar exp(const Scalar& a) {
  if (!a.is_exact()) return Scalar(std::exp(a.as_double()));
  if (a.is_zero()) return Scalar::integer(1);
  throw ModeError("exp(" + a.str() + ") is irrational; use float mode");
}

inline Scalar log(const Scalar& a) {
  if (a.sign() <= 0) throw DomainError("log of non-positive value " + a.str());
  if (!a.is_exact()) return Scalar(std::log(a.as_double()));
  if (a.is_one()) return Scalar::integer(0);
  throw ModeError("log(" + a.str() + ") is irrational; use float mode");
}

inline Scalar sin(const Scalar& a) {
  if (!a.is_exact()) return Scalar(std::sin(a.as_double()));
  if (a.is_zero()) return Scalar::integer(0);
  throw ModeError("sin(" + a.str() + ") is irrational; use float mode");
}

inline Scalar cos(const Scalar& a) {
  if (!a.is_exact()) return Scalar(std::cos(a.as_double()));
  if (a.is_zero()) return Scalar::integer(1);
  throw ModeError("cos(" + a.str() + ") is irrational; use float mode");
}

inline Scalar sqrt(const Scalar& a) {
  if (a.sign() < 0) throw DomainError("sqrt of negative value " + a.str());
  if (!a.is_exact()) return Scalar(std::sqrt(a.as_double()));
  if (a.is_zero()) return a;
  return pow_real(a, Scalar::ratio(1, 2));
}

}  // namespace derivid
