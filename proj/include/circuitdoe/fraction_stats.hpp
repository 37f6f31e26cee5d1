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

#ifndef CIRCUITDOE_FRACTION_STATS_HPP_
#define CIRCUITDOE_FRACTION_STATS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circuitdoe/circuit_engine.hpp"
#include "circuitdoe/factorial_model.hpp"
#include "circuitdoe/rational.hpp"

namespace circuitdoe {

// Subset F of the candidate points of one model.
class Fraction {
 public:
  Fraction() = default;
  // Sorts the indices; throws InvalidInputError on duplicates or indices
  // outside [0, num_points).
  Fraction(std::string fingerprint, int num_points, std::vector<int> points);

  static Fraction of(const ModelMatrix& model, std::vector<int> points);

  const std::string& fingerprint() const { return fingerprint_; }
  int num_points() const { return num_points_; }
  const std::vector<int>& points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }  // #F
  // Y_F.
  std::vector<uint8_t> indicator() const;
  bool contains(int point) const;

  bool operator==(const Fraction&) const = default;
  auto operator<=>(const Fraction& o) const { return points_ <=> o.points_; }

 private:
  std::string fingerprint_;
  int num_points_ = 0;
  std::vector<int> points_;
};

using CountTable = std::array<int64_t, 5>;

struct MoveProfile {
  // (b-bar_F)_i = |supp(f_i) cap F| for each basic move.
  std::vector<int> b_bar;
  CountTable count_table{};
  Rational mean;
  Rational variance;  // population form

  int64_t num_moves() const;
};

// Mean and variance recovered from a count table over values 0..4.
std::pair<Rational, Rational> moments_from_counts(const CountTable& table);

MoveProfile intersection_counts(const Fraction& fraction, const BasicMoveSet& moves);

// b_F over an arbitrary circuit list.
std::vector<int> intersection_vector(const Fraction& fraction, std::span<const Circuit> circuits);

enum class CircuitScope { kAll, kBasicMoves };

// sum_i (b_i - (b_F)_i)^2 over the circuit basis.
int64_t g2(const Fraction& fraction, const CircuitBasis& basis, CircuitScope scope = CircuitScope::kAll);
// max_i (b_F)_i over the circuit basis (0 for an empty basis).
int g3(const Fraction& fraction, const CircuitBasis& basis, CircuitScope scope = CircuitScope::kAll);

struct SaturationVerdict {
  // No circuit support inside F.
  bool is_saturated = false;
  // First circuit (canonical order) whose support lies inside F.
  std::optional<Circuit> witness;
  // rank(X_F) = p, computed independently of the circuits.
  bool rank_check = false;
};

// Profile export: k,count0..count4,mean,variance,d_efficiency,fraction
// with the fraction's indices joined by ';'.
std::string profile_csv_header();
std::string profile_csv_row(const Fraction& fraction, const MoveProfile& profile, double efficiency);

// Throws NotApplicableError unless #F = p.
SaturationVerdict is_saturated(const Fraction& fraction, const CircuitBasis& basis, const ModelMatrix& model);

}  // namespace circuitdoe

#endif  // CIRCUITDOE_FRACTION_STATS_HPP_
