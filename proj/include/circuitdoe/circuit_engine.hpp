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

#ifndef CIRCUITDOE_CIRCUIT_ENGINE_HPP_
#define CIRCUITDOE_CIRCUIT_ENGINE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "circuitdoe/factorial_model.hpp"

namespace circuitdoe {

// Sparse primitive kernel vector of A = X^T with minimal support.
// Invariants after canonicalize(): support strictly increasing, all
// coefficients nonzero, gcd of |coef| = 1, coef.front() > 0.
struct Circuit {
  std::vector<int> support;
  std::vector<int64_t> coef;

  int support_size() const { return static_cast<int>(support.size()); }

  auto operator<=>(const Circuit&) const = default;
};

// Divides by the gcd and flips the sign so the first nonzero entry (in
// index order) is positive. Zero entries are dropped.
// Throws InvalidInputError for the zero vector or repeated indices.
Circuit canonicalize(std::span<const std::pair<int, int64_t>> entries);
Circuit canonicalize(std::span<const int> support, std::span<const int64_t> coef);

struct CircuitBasis {
  int num_points = 0;      // K
  int num_parameters = 0;  // p
  std::string fingerprint;
  // Sorted by support (lexicographic).
  std::vector<Circuit> circuits;
  // Largest support size enumerated; 0 means unrestricted (complete basis).
  int max_support_size = 0;

  int64_t size() const { return static_cast<int64_t>(circuits.size()); }  // L
  bool complete() const { return max_support_size == 0; }
  std::map<int, int64_t> support_size_histogram() const;
  // b_i = #supp(f_i).
  std::vector<int> support_sizes() const;
};

struct BasicMoveSet {
  int num_points = 0;
  std::string fingerprint;
  std::vector<Circuit> moves;

  int64_t size() const { return static_cast<int64_t>(moves.size()); }  // L-bar
};

struct EnumerationOptions {
  // 0 = hardware concurrency.
  int threads = 0;
  // Only circuits with at most this many support points; 0 = all.
  int max_support_size = 0;
};

// All circuits of A = X^T, found by depth-first extension of row-independent
// point sets in increasing index order. Each circuit C is emitted exactly
// once, at the node C \ {max C}.
CircuitBasis enumerate_circuits(const ModelMatrix& model, const EnumerationOptions& options = {});

// Depth-limited enumeration of the support-4 circuits only.
BasicMoveSet enumerate_basic_moves(const ModelMatrix& model, int threads = 0);

BasicMoveSet basic_moves(const CircuitBasis& basis);

// A f = 0 and every proper subset of supp(f) indexes independent rows of X.
bool verify_circuit(const Circuit& candidate, const ModelMatrix& model);

// Circuit supported exactly on `support` via signed maximal minors, or
// nullopt when the support is not a minimal dependent set.
std::optional<Circuit> circuit_on_support(const ModelMatrix& model, std::span<const int> support);

// A f computed exactly.
std::vector<int64_t> apply_model_transpose(const ModelMatrix& model, const Circuit& circuit);

// JSON Lines: header {"K","p","L","fingerprint","max_support"}, then one
// {"support":[...],"coef":[...]} per circuit.
void write_basis(std::ostream& out, const CircuitBasis& basis);
CircuitBasis read_basis(std::istream& in);
void write_moves(std::ostream& out, const BasicMoveSet& moves);

// Reads <cache_dir>/<fingerprint>.jsonl when present, otherwise enumerates
// and writes it.
CircuitBasis load_or_enumerate(const ModelMatrix& model, const std::filesystem::path& cache_dir,
                               const EnumerationOptions& options = {});

}  // namespace circuitdoe

#endif  // CIRCUITDOE_CIRCUIT_ENGINE_HPP_
