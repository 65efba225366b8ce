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

// Recursive-descent parser for the expression language:
//
//   expr    := term (('+'|'-') term)* ;
//   term    := unary (('*'|'/') unary)* ;
//   unary   := '-' unary | power ;
//   power   := atom ('^' unary)? ;
//   atom    := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')' ;
//   FUNC    := 'exp' | 'log' | 'sin' | 'cos' | 'sqrt' ;
//   NUMBER  := INT | INT '/' INT | DECIMAL ;
//
// A rational literal INT/INT is written without whitespace; "3 / 4" is a
// division node. Exponents must be constant: exact integers give PowInt,
// anything else PowReal.

#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "derivid/error.hpp"
#include "derivid/expr.hpp"

namespace derivid {

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected, std::string found)
      : Error("parse error at offset " + std::to_string(offset) +
              ": expected " + expected + ", found " + found),
        offset_(offset),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  /// Zero-based byte offset into the input.
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::size_t offset_;
  std::string expected_;
  std::string found_;
};

namespace detail {

enum class Tok { number, x, func, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  Scalar number;
  Elementary fn = Elementary::exp;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    const std::size_t start = pos_;
    if (pos_ == src_.size()) return {Tok::end, start, {}, {}};
    const char c = src_[pos_];
    auto single = [&](Tok t) {
      ++pos_;
      return Token{t, start, src_.substr(start, 1), {}};
    };
    switch (c) {
      case '+': return single(Tok::plus);
      case '-': return single(Tok::minus);
      case '*': return single(Tok::star);
      case '/': return single(Tok::slash);
      case '^': return single(Tok::caret);
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view word = src_.substr(start, pos_ - start);
      if (word == "x") return {Tok::x, start, word, {}};
      static constexpr std::pair<std::string_view, Elementary> kFuncs[] = {
          {"exp", Elementary::exp}, {"log", Elementary::log},
          {"sin", Elementary::sin}, {"cos", Elementary::cos},
          {"sqrt", Elementary::sqrt}};
      for (const auto& [name, fn] : kFuncs) {
        if (word == name) return {Tok::func, start, word, {}, fn};
      }
      throw ParseError(start, "'x', a number or a function name",
                       "identifier '" + std::string(word) + "'");
    }
    throw ParseError(start, "an expression", "'" + std::string(1, c) + "'");
  }

 private:
  std::size_t digits() {
    const std::size_t begin = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return pos_ - begin;
  }
  bool digit_at(std::size_t i) const {
    return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
  }

  Token number(std::size_t start) {
    digits();
    bool is_decimal = false;
    if (pos_ < src_.size() && src_[pos_] == '.' && digit_at(pos_ + 1)) {
      ++pos_;
      digits();
      is_decimal = true;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (digit_at(p)) {
        pos_ = p;
        digits();
        is_decimal = true;
      }
    }
    if (is_decimal) {
      const std::string text(src_.substr(start, pos_ - start));
      return {Tok::number, start, src_.substr(start, pos_ - start),
              Scalar(std::stod(text))};
    }
    BigInt num(std::string(src_.substr(start, pos_ - start)));
    BigInt den = 1;
    if (pos_ < src_.size() && src_[pos_] == '/' && digit_at(pos_ + 1)) {
      const std::size_t den_start = ++pos_;
      digits();
      den = BigInt(std::string(src_.substr(den_start, pos_ - den_start)));
      if (den == 0) {
        throw ParseError(den_start, "a non-zero denominator", "0");
      }
    }
    return {Tok::number, start, src_.substr(start, pos_ - start),
            Scalar(Rational(num, den))};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  Expr parse_all() {
    Expr e = expr();
    if (tok_.kind != Tok::end) fail("an operator or end of input");
    return e;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& expected) const {
    const std::string found =
        tok_.kind == Tok::end ? "end of input" : "'" + std::string(tok_.text) + "'";
    throw ParseError(tok_.offset, expected, found);
  }

  Expr expr() {
    Expr lhs = term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      const BinaryOp op = tok_.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      advance();
      lhs = binary(op, lhs, term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      const BinaryOp op = tok_.kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      advance();
      lhs = binary(op, lhs, unary());
    }
    return lhs;
  }

  Expr unary() {
    if (tok_.kind == Tok::minus) {
      advance();
      return negate(unary());
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (tok_.kind != Tok::caret) return base;
    advance();
    const std::size_t exponent_offset = tok_.offset;
    const Expr exponent = unary();
    auto value = fold_constant(exponent);
    if (!value) {
      throw ParseError(exponent_offset, "a constant exponent",
                       "'" + exponent.str() + "'");
    }
    if (value->is_integer()) {
      if (auto m = value->to_int64()) return pow_int(base, *m);
      throw ParseError(exponent_offset, "an exponent in 64-bit range", value->str());
    }
    return pow_real(base, *value);
  }

  Expr atom() {
    switch (tok_.kind) {
      case Tok::number: {
        Expr e = constant(tok_.number);
        advance();
        return e;
      }
      case Tok::x:
        advance();
        return var();
      case Tok::func: {
        const Elementary fn = tok_.fn;
        advance();
        if (tok_.kind != Tok::lparen) fail("'('");
        advance();
        Expr arg = expr();
        if (tok_.kind != Tok::rparen) fail("')'");
        advance();
        return apply(fn, arg);
      }
      case Tok::lparen: {
        advance();
        Expr e = expr();
        if (tok_.kind != Tok::rparen) fail("')'");
        advance();
        return e;
      }
      default:
        fail("a number, 'x', a function or '('");
    }
  }

  // Value of a variable-free exponent built from constants and + - * / ^int.
  static std::optional<Scalar> fold_constant(const Expr& e) {
    if (auto* c = as<node::Const>(e)) return c->value;
    if (auto* n = as<node::Neg>(e)) {
      if (auto v = fold_constant(n->arg)) return -*v;
      return std::nullopt;
    }
    if (auto* b = as<node::Binary>(e)) {
      auto l = fold_constant(b->lhs);
      auto r = fold_constant(b->rhs);
      if (!l || !r || l->mode() != r->mode()) return std::nullopt;
      switch (b->op) {
        case BinaryOp::add: return *l + *r;
        case BinaryOp::sub: return *l - *r;
        case BinaryOp::mul: return *l * *r;
        case BinaryOp::div:
          if (r->is_zero()) return std::nullopt;
          return *l / *r;
      }
    }
    if (auto* p = as<node::PowInt>(e)) {
      auto v = fold_constant(p->base);
      if (!v || (v->is_zero() && p->exponent < 0)) return std::nullopt;
      return pow(*v, p->exponent);
    }
    return std::nullopt;
  }

  Lexer lexer_;
  Token tok_{Tok::end, 0, {}, {}};
};

}  // namespace detail

/// Parses `text` into an expression; throws ParseError on malformed input.
inline Expr parse(std::string_view text) {
  return detail::Parser(text).parse_all();
}

}  // namespace derivid
