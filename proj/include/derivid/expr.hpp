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
#include <memory>
#include <string>
#include <unordered_map>
#include <variant>

#include "derivid/error.hpp"
#include "derivid/jet.hpp"
#include "derivid/scalar.hpp"

namespace derivid {

struct Node;

/// Immutable expression tree in the single variable x. Subtrees are shared.
class Expr {
 public:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  const Node& node() const { return *node_; }
  const Node* get() const { return node_.get(); }

  /// Canonical text; parse(e.str()) reproduces e structurally.
  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const Node> node_;
};

enum class BinaryOp { add, sub, mul, div };

namespace node {

struct Const {
  Scalar value;
};
struct Var {};
struct Neg {
  Expr arg;
};
struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
struct PowInt {
  Expr base;
  std::int64_t exponent;
};
struct PowReal {
  Expr base;
  Scalar exponent;
};
struct Apply {
  Elementary fn;
  Expr arg;
};

}  // namespace node

struct Node {
  std::variant<node::Const, node::Var, node::Neg, node::Binary, node::PowInt,
               node::PowReal, node::Apply>
      v;
};

template <typename T>
const T* as(const Expr& e) {
  return std::get_if<T>(&e.node().v);
}

// Raw constructors: build exactly the node asked for. Two normalizations are
// part of the tree invariant: Neg never wraps a Const, and PowReal never
// carries an exact integer exponent.

inline Expr make(node::Const c) {
  return Expr(std::make_shared<const Node>(Node{std::move(c)}));
}
inline Expr constant(const Scalar& s) { return make(node::Const{s}); }
inline Expr constant(std::int64_t v) { return constant(Scalar::integer(v)); }
inline Expr constant(std::int64_t num, std::int64_t den) {
  return constant(Scalar::ratio(num, den));
}
inline Expr var() {
  static const Expr x(std::make_shared<const Node>(Node{node::Var{}}));
  return x;
}
inline Expr negate(const Expr& e) {
  if (auto* c = as<node::Const>(e)) return constant(-c->value);
  return Expr(std::make_shared<const Node>(Node{node::Neg{e}}));
}
inline Expr binary(BinaryOp op, const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Node>(Node{node::Binary{op, a, b}}));
}
inline Expr pow_int(const Expr& base, std::int64_t m) {
  return Expr(std::make_shared<const Node>(Node{node::PowInt{base, m}}));
}
inline Expr pow_real(const Expr& base, const Scalar& alpha) {
  if (alpha.is_integer()) {
    if (auto m = alpha.to_int64()) return pow_int(base, *m);
  }
  return Expr(std::make_shared<const Node>(Node{node::PowReal{base, alpha}}));
}
inline Expr apply(Elementary fn, const Expr& arg) {
  return Expr(std::make_shared<const Node>(Node{node::Apply{fn, arg}}));
}

inline Expr operator+(const Expr& a, const Expr& b) {
  return binary(BinaryOp::add, a, b);
}
inline Expr operator-(const Expr& a, const Expr& b) {
  return binary(BinaryOp::sub, a, b);
}
inline Expr operator*(const Expr& a, const Expr& b) {
  return binary(BinaryOp::mul, a, b);
}
inline Expr operator/(const Expr& a, const Expr& b) {
  return binary(BinaryOp::div, a, b);
}
inline Expr operator-(const Expr& a) { return negate(a); }

// Structural equality.
inline bool operator==(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  const auto& va = a.node().v;
  const auto& vb = b.node().v;
  if (va.index() != vb.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(vb);
        if constexpr (std::is_same_v<T, node::Const>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, node::Var>) {
          return true;
        } else if constexpr (std::is_same_v<T, node::Neg>) {
          return x.arg == y.arg;
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
        } else if constexpr (std::is_same_v<T, node::PowInt>) {
          return x.exponent == y.exponent && x.base == y.base;
        } else if constexpr (std::is_same_v<T, node::PowReal>) {
          return x.exponent == y.exponent && x.base == y.base;
        } else {
          return x.fn == y.fn && x.arg == y.arg;
        }
      },
      va);
}

namespace detail {

inline std::string constant_text(const Scalar& s) {
  if (!s.is_exact()) {
    std::string t = format_double(s.as_double());
    if (t.find_first_of(".e") == std::string::npos) t += ".0";
    return "(" + t + ")";
  }
  if (s.is_integer() && s.sign() >= 0) return s.pretty();
  return "(" + s.pretty() + ")";
}

inline char op_char(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
  }
  return '?';
}

}  // namespace detail

inline std::string Expr::str() const {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Const>) {
          return detail::constant_text(x.value);
        } else if constexpr (std::is_same_v<T, node::Var>) {
          return "x";
        } else if constexpr (std::is_same_v<T, node::Neg>) {
          return "(-" + x.arg.str() + ")";
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return "(" + x.lhs.str() + " " + detail::op_char(x.op) + " " +
                 x.rhs.str() + ")";
        } else if constexpr (std::is_same_v<T, node::PowInt>) {
          return "(" + x.base.str() + "^" + std::to_string(x.exponent) + ")";
        } else if constexpr (std::is_same_v<T, node::PowReal>) {
          return "(" + x.base.str() + "^" + detail::constant_text(x.exponent) +
                 ")";
        } else {
          return std::string(elementary_name(x.fn)) + "(" + x.arg.str() + ")";
        }
      },
      node_->v);
}

/// True if any constant in the tree is a float.
inline bool has_float_constant(const Expr& e) {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Const>) {
          return !x.value.is_exact();
        } else if constexpr (std::is_same_v<T, node::Var>) {
          return false;
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return has_float_constant(x.lhs) || has_float_constant(x.rhs);
        } else if constexpr (std::is_same_v<T, node::PowInt>) {
          return has_float_constant(x.base);
        } else if constexpr (std::is_same_v<T, node::PowReal>) {
          return !x.exponent.is_exact() || has_float_constant(x.base);
        } else {
          return has_float_constant(x.arg);
        }
      },
      e.node().v);
}

// Simplifying builders used by diff: constant folding and 0/1 absorption.
namespace simplify {

inline const Scalar* const_value(const Expr& e) {
  auto* c = as<node::Const>(e);
  return c ? &c->value : nullptr;
}
inline bool is_zero(const Expr& e) {
  auto* c = const_value(e);
  return c && c->is_zero();
}
inline bool is_one(const Expr& e) {
  auto* c = const_value(e);
  return c && c->is_one();
}
inline bool same_mode_consts(const Expr& a, const Expr& b) {
  auto* x = const_value(a);
  auto* y = const_value(b);
  return x && y && x->mode() == y->mode();
}

inline Expr neg(const Expr& e) {
  if (auto* n = as<node::Neg>(e)) return n->arg;
  return negate(e);
}
inline Expr add(const Expr& a, const Expr& b) {
  if (same_mode_consts(a, b)) return constant(*const_value(a) + *const_value(b));
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  return a + b;
}
inline Expr sub(const Expr& a, const Expr& b) {
  if (same_mode_consts(a, b)) return constant(*const_value(a) - *const_value(b));
  if (is_zero(b)) return a;
  if (is_zero(a)) return neg(b);
  return a - b;
}
inline Expr mul(const Expr& a, const Expr& b) {
  if (same_mode_consts(a, b)) return constant(*const_value(a) * *const_value(b));
  if (is_zero(a)) return a;
  if (is_zero(b)) return b;
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  return a * b;
}
inline Expr div(const Expr& a, const Expr& b) {
  if (same_mode_consts(a, b) && !const_value(b)->is_zero()) {
    return constant(*const_value(a) / *const_value(b));
  }
  if (is_one(b)) return a;
  return a / b;
}
inline Expr ipow(const Expr& base, std::int64_t m) {
  if (m == 0) return constant(1);
  if (m == 1) return base;
  if (auto* c = const_value(base); c && (m > 0 || !c->is_zero())) {
    return constant(pow(*c, m));
  }
  return pow_int(base, m);
}
inline Expr rpow(const Expr& base, const Scalar& alpha) {
  if (alpha.is_integer()) {
    if (auto m = alpha.to_int64()) return ipow(base, *m);
  }
  return pow_real(base, alpha);
}

}  // namespace simplify

namespace detail {

class Differentiator {
 public:
  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Expr d = visit(e);
    memo_.emplace(e.get(), d);
    keep_.push_back(e);
    return d;
  }

 private:
  Expr visit(const Expr& e) {
    using namespace simplify;
    return std::visit(
        [&](const auto& x) -> Expr {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, node::Const>) {
            return constant(0);
          } else if constexpr (std::is_same_v<T, node::Var>) {
            return constant(1);
          } else if constexpr (std::is_same_v<T, node::Neg>) {
            return neg((*this)(x.arg));
          } else if constexpr (std::is_same_v<T, node::Binary>) {
            const Expr da = (*this)(x.lhs);
            const Expr db = (*this)(x.rhs);
            switch (x.op) {
              case BinaryOp::add: return add(da, db);
              case BinaryOp::sub: return sub(da, db);
              case BinaryOp::mul:
                return add(mul(da, x.rhs), mul(x.lhs, db));
              case BinaryOp::div:
                return div(sub(mul(da, x.rhs), mul(x.lhs, db)),
                           ipow(x.rhs, 2));
            }
            throw StructuralError("unknown binary operator");
          } else if constexpr (std::is_same_v<T, node::PowInt>) {
            if (x.exponent == 0) return constant(0);
            return mul(mul(constant(x.exponent), ipow(x.base, x.exponent - 1)),
                       (*this)(x.base));
          } else if constexpr (std::is_same_v<T, node::PowReal>) {
            const Scalar lowered = x.exponent - 1;
            return mul(mul(constant(x.exponent), rpow(x.base, lowered)),
                       (*this)(x.base));
          } else {
            const Expr du = (*this)(x.arg);
            switch (x.fn) {
              case Elementary::exp: return mul(e, du);
              case Elementary::log: return div(du, x.arg);
              case Elementary::sin:
                return mul(apply(Elementary::cos, x.arg), du);
              case Elementary::cos:
                return neg(mul(apply(Elementary::sin, x.arg), du));
              case Elementary::sqrt:
                return div(du, mul(constant(2), e));
            }
            throw StructuralError("unknown elementary function");
          }
        },
        e.node().v);
  }

  std::unordered_map<const Node*, Expr> memo_;
  std::vector<Expr> keep_;  // pins memo keys alive
};

}  // namespace detail

/// Symbolic derivative d/dx with light simplification.
inline Expr diff(const Expr& e) { return detail::Differentiator{}(e); }

/// k-fold derivative.
inline Expr diff(const Expr& e, unsigned k) {
  Expr out = e;
  for (unsigned i = 0; i < k; ++i) out = diff(out);
  return out;
}

namespace detail {

/// Evaluates a tree bottom-up over a value type V (Scalar or Jet), memoized
/// on shared subtrees. `lift` maps a constant into V.
template <typename V, typename Ops>
class Evaluator {
 public:
  explicit Evaluator(Ops ops) : ops_(std::move(ops)) {}

  V operator()(const Expr& e) {
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    V v = visit(e);
    memo_.emplace(e.get(), v);
    return v;
  }

 private:
  V visit(const Expr& e) {
    return std::visit(
        [&](const auto& x) -> V {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, node::Const>) {
            return ops_.lift(x.value);
          } else if constexpr (std::is_same_v<T, node::Var>) {
            return ops_.variable();
          } else if constexpr (std::is_same_v<T, node::Neg>) {
            return -(*this)(x.arg);
          } else if constexpr (std::is_same_v<T, node::Binary>) {
            const V a = (*this)(x.lhs);
            const V b = (*this)(x.rhs);
            return guarded(e, [&] {
              switch (x.op) {
                case BinaryOp::add: return V(a + b);
                case BinaryOp::sub: return V(a - b);
                case BinaryOp::mul: return V(a * b);
                case BinaryOp::div: return V(a / b);
              }
              throw StructuralError("unknown binary operator");
            });
          } else if constexpr (std::is_same_v<T, node::PowInt>) {
            const V a = (*this)(x.base);
            return guarded(e, [&] {
              return V(pow_real(a, Scalar::integer(x.exponent)));
            });
          } else if constexpr (std::is_same_v<T, node::PowReal>) {
            const V a = (*this)(x.base);
            return guarded(e, [&] {
              return V(pow_real(a, ops_.lift_scalar(x.exponent)));
            });
          } else {
            const V a = (*this)(x.arg);
            return guarded(e, [&] { return V(apply(x.fn, a)); });
          }
        },
        e.node().v);
  }

  template <typename F>
  static V guarded(const Expr& e, F&& f) {
    try {
      return f();
    } catch (const DomainError& err) {
      throw DomainError(std::string(err.what()) + " in '" + e.str() + "'");
    } catch (const ModeError& err) {
      throw ModeError(std::string(err.what()) + " in '" + e.str() + "'");
    }
  }

  Ops ops_;
  std::unordered_map<const Node*, V> memo_;
};

struct ScalarOps {
  Scalar x0;
  Scalar lift(const Scalar& c) const { return c.to_mode(x0.mode()); }
  Scalar lift_scalar(const Scalar& c) const { return c.to_mode(x0.mode()); }
  Scalar variable() const { return x0; }
};

struct JetOps {
  Scalar x0;
  unsigned order;
  Jet lift(const Scalar& c) const { return Jet::constant(c.to_mode(x0.mode()), order); }
  Scalar lift_scalar(const Scalar& c) const { return c.to_mode(x0.mode()); }
  Jet variable() const { return Jet::variable(x0, order); }
};

}  // namespace detail

/// Value of e at x0, in the mode of x0. Exact mode with a float constant in
/// the tree throws ModeError.
inline Scalar eval_scalar(const Expr& e, const Scalar& x0) {
  return detail::Evaluator<Scalar, detail::ScalarOps>(detail::ScalarOps{x0})(e);
}

/// Order-`order` jet of e at x0, built node by node from the identity jet.
inline Jet eval_jet(const Expr& e, const Scalar& x0, unsigned order) {
  return detail::Evaluator<Jet, detail::JetOps>(detail::JetOps{x0, order})(e);
}

/// k-th derivative of e at x0 by k-fold symbolic differentiation followed by
/// scalar evaluation. Shares no code with the jet path.
inline Scalar nth_derivative_oracle(const Expr& e, unsigned k, const Scalar& x0) {
  return eval_scalar(diff(e, k), x0);
}

}  // namespace derivid
