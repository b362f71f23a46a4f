// Copyright 2026 The OIL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OIL_ERRORS_HPP
#define OIL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace oil {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Dimension or alphabet mismatch between operands.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(what) {}
};

// Argument outside its mathematical domain (negative weight, beta < 0, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Structurally valid input that carries no usable information
// (all-zero weight vector, empty sample list, zero-mass marginal).
class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& what) : Error(what) {}
};

// Numerical failure inside an iterative solver (non-finite objective,
// positivity violation in a likelihood ratio).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// An enumeration request whose size exceeds the configured budget.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(what) {}
};

// File or serialization failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace oil

#endif  // OIL_ERRORS_HPP
