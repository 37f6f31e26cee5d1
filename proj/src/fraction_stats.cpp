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

#include "circuitdoe/fraction_stats.hpp"

#include <algorithm>

#include "circuitdoe/error.hpp"

namespace circuitdoe {

Fraction::Fraction(std::string fingerprint, int num_points, std::vector<int> points)
    : fingerprint_(std::move(fingerprint)), num_points_(num_points), points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  for (size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] < 0 || points_[i] >= num_points_)
      throw InvalidInputError("fraction point " + std::to_string(points_[i]) + " outside [0, " +
                              std::to_string(num_points_) + ")");
    if (i > 0 && points_[i] == points_[i - 1])
      throw InvalidInputError("fraction lists point " + std::to_string(points_[i]) + " twice");
  }
}

Fraction Fraction::of(const ModelMatrix& model, std::vector<int> points) {
  return Fraction(model.fingerprint(), model.num_points(), std::move(points));
}

std::vector<uint8_t> Fraction::indicator() const {
  std::vector<uint8_t> y(num_points_, 0);
  for (int i : points_) y[i] = 1;
  return y;
}

bool Fraction::contains(int point) const { return std::binary_search(points_.begin(), points_.end(), point); }

int64_t MoveProfile::num_moves() const { return static_cast<int64_t>(b_bar.size()); }

std::pair<Rational, Rational> moments_from_counts(const CountTable& table) {
  int64_t n = 0, s1 = 0, s2 = 0;
  for (int v = 0; v < 5; ++v) {
    n += table[v];
    s1 += v * table[v];
    s2 += v * v * table[v];
  }
  if (n == 0) return {Rational(0), Rational(0)};
  const Rational mean(s1, n);
  return {mean, Rational(s2, n) - mean * mean};
}

std::vector<int> intersection_vector(const Fraction& fraction, std::span<const Circuit> circuits) {
  const auto y = fraction.indicator();
  std::vector<int> b;
  b.reserve(circuits.size());
  for (const auto& c : circuits) {
    int hits = 0;
    for (int idx : c.support) {
      if (idx < 0 || idx >= fraction.num_points()) throw InvalidInputError("circuit index outside the design");
      hits += y[idx];
    }
    b.push_back(hits);
  }
  return b;
}

namespace {

void require_same_model(const Fraction& fraction, const std::string& fingerprint) {
  if (fraction.fingerprint() != fingerprint)
    throw InvalidInputError("fraction and circuits belong to different models (" + fraction.fingerprint() + " vs " +
                            fingerprint + ")");
}

std::vector<Circuit> scoped(const CircuitBasis& basis, CircuitScope scope) {
  if (scope == CircuitScope::kAll) return {};
  return basic_moves(basis).moves;
}

}  // namespace

MoveProfile intersection_counts(const Fraction& fraction, const BasicMoveSet& moves) {
  require_same_model(fraction, moves.fingerprint);
  MoveProfile profile;
  profile.b_bar = intersection_vector(fraction, moves.moves);
  for (int v : profile.b_bar) {
    if (v > 4) throw InvalidInputError("basic move with more than 4 support points");
    ++profile.count_table[v];
  }
  std::tie(profile.mean, profile.variance) = moments_from_counts(profile.count_table);
  return profile;
}

int64_t g2(const Fraction& fraction, const CircuitBasis& basis, CircuitScope scope) {
  require_same_model(fraction, basis.fingerprint);
  const auto restricted = scoped(basis, scope);
  std::span<const Circuit> circuits = scope == CircuitScope::kAll ? std::span<const Circuit>(basis.circuits)
                                                                   : std::span<const Circuit>(restricted);
  const auto b_f = intersection_vector(fraction, circuits);
  int64_t total = 0;
  for (size_t i = 0; i < circuits.size(); ++i) {
    const int64_t gap = circuits[i].support_size() - b_f[i];
    total += gap * gap;
  }
  return total;
}

int g3(const Fraction& fraction, const CircuitBasis& basis, CircuitScope scope) {
  require_same_model(fraction, basis.fingerprint);
  const auto restricted = scoped(basis, scope);
  std::span<const Circuit> circuits = scope == CircuitScope::kAll ? std::span<const Circuit>(basis.circuits)
                                                                   : std::span<const Circuit>(restricted);
  const auto b_f = intersection_vector(fraction, circuits);
  return b_f.empty() ? 0 : *std::max_element(b_f.begin(), b_f.end());
}

std::string profile_csv_header() { return "k,count0,count1,count2,count3,count4,mean,variance,d_efficiency,fraction"; }

std::string profile_csv_row(const Fraction& fraction, const MoveProfile& profile, double efficiency) {
  std::string row = std::to_string(fraction.size());
  for (int64_t c : profile.count_table) row += "," + std::to_string(c);
  row += "," + format_fixed(profile.mean, 2) + "," + format_fixed(profile.variance, 2) + "," +
         format_fixed(efficiency, 2) + ",";
  for (size_t i = 0; i < fraction.points().size(); ++i) {
    if (i) row += ';';
    row += std::to_string(fraction.points()[i]);
  }
  return row;
}

SaturationVerdict is_saturated(const Fraction& fraction, const CircuitBasis& basis, const ModelMatrix& model) {
  require_same_model(fraction, basis.fingerprint);
  require_same_model(fraction, model.fingerprint());
  const int p = model.num_parameters();
  if (fraction.size() != p)
    throw NotApplicableError("saturation is defined for fractions with p = " + std::to_string(p) + " points, got " +
                             std::to_string(fraction.size()));
  if (!basis.complete()) throw NotApplicableError("saturation test needs the complete circuit basis");
  SaturationVerdict verdict;
  const auto y = fraction.indicator();
  for (const auto& c : basis.circuits) {
    const bool inside = std::all_of(c.support.begin(), c.support.end(), [&](int i) { return y[i] != 0; });
    if (inside) {
      verdict.witness = c;
      break;
    }
  }
  verdict.is_saturated = !verdict.witness.has_value();
  verdict.rank_check = exact_rank(model.entries.select_rows(fraction.points())) == p;
  return verdict;
}

}  // namespace circuitdoe
