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
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "derivid/error.hpp"
#include "derivid/scalar.hpp"

namespace derivid {

/// Vector of non-negative integers k = (k_1, ..., k_r), r >= 1.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<unsigned> entries) : entries_(entries) {}
  explicit MultiIndex(std::vector<unsigned> entries)
      : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  unsigned operator[](std::size_t i) const { return entries_[i]; }
  unsigned& operator[](std::size_t i) { return entries_[i]; }
  std::span<const unsigned> entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// |k|
  unsigned total() const {
    return std::accumulate(entries_.begin(), entries_.end(), 0u);
  }

  std::string str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(entries_[i]);
    }
    return out + ")";
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<unsigned> entries_;
};

inline BigInt factorial_int(unsigned n) {
  BigInt out = 1;
  for (unsigned i = 2; i <= n; ++i) out *= i;
  return out;
}

/// n! as an exact integer scalar.
inline Scalar factorial(unsigned n) { return Scalar(factorial_int(n)); }

/// n! / (k_1! ... k_r! (n - |k|)!). Throws DomainError when |k| > n.
inline Scalar multinomial(unsigned n, const MultiIndex& k) {
  const unsigned total = k.total();
  if (total > n) {
    throw DomainError("multinomial: |k| = " + std::to_string(total) +
                      " exceeds n = " + std::to_string(n));
  }
  BigInt denom = factorial_int(n - total);
  for (unsigned ki : k) denom *= factorial_int(ki);
  return Scalar(BigInt(factorial_int(n) / denom));
}

/// C(n, k) for 0 <= k <= n.
inline Scalar binomial(unsigned n, unsigned k) {
  return multinomial(n, MultiIndex{k});
}

/// Every k in (Z>=0)^r with |k| = n, in increasing lexicographic order.
/// There are C(n + r - 1, r - 1) of them.
inline std::vector<MultiIndex> compositions(unsigned n, std::size_t r) {
  if (r == 0) throw DomainError("compositions: r must be at least 1");
  std::vector<MultiIndex> out;
  std::vector<unsigned> k(r, 0);
  k[r - 1] = n;
  // Lex successor: the rightmost positive entry at position >= 1 gives one
  // unit to its left neighbour; the rest of its mass moves to the end.
  while (true) {
    out.emplace_back(k);
    std::size_t pos = r - 1;
    while (pos > 0 && k[pos] == 0) --pos;
    if (pos == 0) break;  // all mass in k[0]: last composition
    const unsigned moved = k[pos] - 1;
    k[pos - 1] += 1;
    k[pos] = 0;
    k[r - 1] = moved;
  }
  return out;
}

/// z (z-1) ... (z-s+1) / s!, in the mode of z.
inline Scalar generalized_binomial(const Scalar& z, unsigned s) {
  Scalar out = Scalar::of_mode(z.mode(), 1);
  for (unsigned j = 0; j < s; ++j) out *= z - static_cast<std::int64_t>(j);
  return out / factorial(s).to_mode(z.mode());
}

}  // namespace derivid
