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

#ifndef CIRCUITDOE_EXACT_HPP_
#define CIRCUITDOE_EXACT_HPP_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace circuitdoe {

// Dense row-major integer matrix. Entries are int64; every routine that
// multiplies entries checks for overflow and throws std::overflow_error.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<int64_t>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  int64_t& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  int64_t operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  std::span<const int64_t> row(int r) const {
    return {data_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_)};
  }

  IntMatrix transpose() const;
  // Rows picked in the given order.
  IntMatrix select_rows(std::span<const int> rows) const;
  // Horizontal concatenation; both operands need the same row count.
  IntMatrix hconcat(const IntMatrix& other) const;
  // Gram matrix M^T M.
  IntMatrix gram() const;

  bool operator==(const IntMatrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int64_t> data_;
};

struct EliminationResult {
  int rank = 0;
  // Determinant when the matrix is square, 0 otherwise.
  int64_t determinant = 0;
};

// Bareiss fraction-free elimination with row pivoting. Every intermediate
// value is a minor of the input, so the division at each step is exact.
EliminationResult bareiss(IntMatrix m);

int exact_rank(const IntMatrix& m);
int64_t exact_determinant(const IntMatrix& m);

int64_t checked_mul(int64_t a, int64_t b);
int64_t checked_add(int64_t a, int64_t b);

}  // namespace circuitdoe

#endif  // CIRCUITDOE_EXACT_HPP_
