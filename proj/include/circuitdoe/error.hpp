// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CIRCUITDOE_ERROR_HPP_
#define CIRCUITDOE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace circuitdoe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Factor levels, coding names or CLI inputs that do not describe a valid model.
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

// Malformed vectors, fractions or files.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Operation is defined only for a different fraction size (saturation needs k = p).
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

// Exhaustive scan refused because C(K, k) exceeds the configured budget.
class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& what, double subsets) : Error(what), subsets_(subsets) {}
  double subsets() const { return subsets_; }

 private:
  double subsets_;
};

}  // namespace circuitdoe

#endif  // CIRCUITDOE_ERROR_HPP_
