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

#include <stdexcept>
#include <string>

namespace derivid {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact and a float operand met in one operation, or a transcendental
/// value was requested in exact mode where the result is irrational.
class ModeError : public Error {
 public:
  using Error::Error;
};

/// A value lies outside the domain of an operation (division by zero,
/// log of a non-positive number, |k| > n, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Shapes that do not fit together: jet orders, list lengths.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A derivative beyond the truncation order of a jet was requested.
class OrderError : public Error {
 public:
  using Error::Error;
};

}  // namespace derivid
