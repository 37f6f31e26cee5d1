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

#ifndef CIRCUITDOE_OPTIMAL_SEARCH_HPP_
#define CIRCUITDOE_OPTIMAL_SEARCH_HPP_

#include <cstdint>
#include <vector>

#include "circuitdoe/factorial_model.hpp"
#include "circuitdoe/fraction_stats.hpp"

namespace circuitdoe {

struct DCriterionValue {
  int rank = 0;
  // det of the integer information matrix entries_F^T entries_F. Under
  // Effects coding this is det(X_F^T X_F); under Orthonormal coding the
  // true determinant is det_info * model.determinant_scale().
  int64_t det_info = 0;
  double efficiency = 0.0;  // 100 * D_F^(1/p) / #F
};

// Exact D-criterion of a fraction; singular fractions get efficiency 0.
DCriterionValue d_efficiency(const Fraction& fraction, const ModelMatrix& model);

double efficiency_from_det(int64_t det_info, const Rational& scale, int num_parameters, int fraction_size);

struct RestartRecord {
  int index = 0;
  uint64_t seed = 0;
  std::vector<int> fraction;
  int64_t det_info = 0;
  double efficiency = 0.0;
  int iterations = 0;  // accepted swaps
  // det_info after the initial draw and after every accepted swap
  // (0 while the design is still being repaired to full rank).
  std::vector<int64_t> trace;
};

struct SearchResult {
  Fraction best_fraction;
  DCriterionValue best;
  std::vector<RestartRecord> restarts;
  // Exhaustive scan only: every fraction attaining the optimum.
  std::vector<Fraction> optimal_fractions;
  int64_t subsets_scanned = 0;

  double best_efficiency() const { return best.efficiency; }
};

struct SearchOptions {
  int threads = 1;  // 0 = hardware concurrency
  bool record_trace = true;
};

// Stream seed for restart/run `stream` of a seeded search (splitmix64).
uint64_t derive_seed(uint64_t master, uint64_t stream);

// Multi-start Fedorov exchange over k-subsets of the candidate points.
// Each restart draws a uniform random k-subset, then repeatedly applies the
// single swap (drop one design point, add one unused candidate) that
// maximises (rank, det) lexicographically, ties going to the lowest dropped
// and then lowest added index, until no swap improves.
// Throws InvalidInputError unless p <= k <= K and restarts >= 1.
SearchResult exchange_search(const ModelMatrix& model, int k, int restarts, uint64_t seed,
                             const SearchOptions& options = {});

// One exchange run from a given starting subset.
RestartRecord exchange_from(const ModelMatrix& model, std::vector<int> start);

inline constexpr double kDefaultExhaustiveBudget = 1e7;

double binomial(int n, int k);

// Brute-force optimum over all C(K, k) subsets. Throws BudgetExceededError
// when C(K, k) > budget.
SearchResult exhaustive_best(const ModelMatrix& model, int k, double budget = kDefaultExhaustiveBudget);

}  // namespace circuitdoe

#endif  // CIRCUITDOE_OPTIMAL_SEARCH_HPP_
