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

#ifndef CIRCUITDOE_FACTORIAL_MODEL_HPP_
#define CIRCUITDOE_FACTORIAL_MODEL_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "circuitdoe/exact.hpp"
#include "circuitdoe/rational.hpp"
#include "json.hpp"

namespace circuitdoe {

// Number of levels of each factor, s_1..s_m.
struct FactorSpec {
  std::vector<int> levels;

  // Parses "2,3,4". Throws InvalidSpecError on malformed input or any s_i < 2.
  static FactorSpec parse(std::string_view text);

  void validate() const;
  int num_points() const;      // K
  int num_parameters() const;  // p = 1 + sum(s_i - 1)
  std::string to_string() const;

  bool operator==(const FactorSpec&) const = default;
};

// All level combinations, lexicographic with the last factor fastest.
struct FactorialDesign {
  FactorSpec spec;
  std::vector<std::vector<int>> points;

  int size() const { return static_cast<int>(points.size()); }
  // Position of a level tuple; throws InvalidInputError if not a design point.
  int index_of(const std::vector<int>& tuple) const;
};

enum class Coding { kEffects, kOrthonormal };

std::string_view coding_name(Coding c);
Coding parse_coding(std::string_view name);

// Main-effect model matrix. `entries` always holds integers: for Effects
// coding they are the model matrix itself; for Orthonormal coding they are
// integer Helmert contrast directions and the actual column c equals
// entries(:, c) * sqrt(column_scale_sq[c]). Column scaling leaves ker(X^T)
// unchanged and multiplies det(X_F^T X_F) by a constant.
struct ModelMatrix {
  FactorialDesign design;
  Coding coding = Coding::kEffects;
  IntMatrix entries;
  std::vector<Rational> column_scale_sq;

  int num_points() const { return entries.rows(); }
  int num_parameters() const { return entries.cols(); }
  double value(int row, int col) const;
  // Identifies the model (levels + main effects), not the coding: the
  // circuit basis depends on the column space only.
  std::string fingerprint() const;
  // Product of column_scale_sq.
  Rational determinant_scale() const;

  nlohmann::json to_json() const;
};

FactorialDesign full_factorial(const FactorSpec& spec);
ModelMatrix model_matrix(const FactorialDesign& design, Coding coding = Coding::kEffects);
ModelMatrix model_matrix(const FactorSpec& spec, Coding coding = Coding::kEffects);

std::string model_fingerprint(const FactorSpec& spec);

}  // namespace circuitdoe

#endif  // CIRCUITDOE_FACTORIAL_MODEL_HPP_
