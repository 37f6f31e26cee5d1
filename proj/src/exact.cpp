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

#include "circuitdoe/exact.hpp"

#include <stdexcept>
#include <utility>

namespace circuitdoe {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<int64_t>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  data_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::select_rows(std::span<const int> rows) const {
  IntMatrix out(static_cast<int>(rows.size()), cols_);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= rows_) throw std::out_of_range("IntMatrix::select_rows: row index");
    for (int c = 0; c < cols_; ++c) out(static_cast<int>(i), c) = (*this)(rows[i], c);
  }
  return out;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& other) const {
  if (other.rows_ != rows_) throw std::invalid_argument("IntMatrix::hconcat: row count mismatch");
  IntMatrix out(rows_, cols_ + other.cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
    for (int c = 0; c < other.cols_; ++c) out(r, cols_ + c) = other(r, c);
  }
  return out;
}

IntMatrix IntMatrix::gram() const {
  IntMatrix g(cols_, cols_);
  for (int i = 0; i < cols_; ++i) {
    for (int j = i; j < cols_; ++j) {
      int64_t s = 0;
      for (int r = 0; r < rows_; ++r) s = checked_add(s, checked_mul((*this)(r, i), (*this)(r, j)));
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("integer overflow in exact arithmetic");
  return out;
}

int64_t checked_add(int64_t a, int64_t b) {
  int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("integer overflow in exact arithmetic");
  return out;
}

EliminationResult bareiss(IntMatrix m) {
  const int rows = m.rows();
  const int cols = m.cols();
  int rank = 0;
  int sign = 1;
  __int128 prev = 1;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (m(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int c = 0; c < cols; ++c) std::swap(m(pivot, c), m(rank, c));
      sign = -sign;
    }
    const __int128 piv = m(rank, col);
    for (int r = rank + 1; r < rows; ++r) {
      const __int128 lead = m(r, col);
      for (int c = col + 1; c < cols; ++c) {
        const __int128 v = (piv * m(r, c) - lead * m(rank, c)) / prev;
        if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("bareiss: entry exceeds int64");
        m(r, c) = static_cast<int64_t>(v);
      }
      m(r, col) = 0;
    }
    prev = piv;
    ++rank;
  }
  EliminationResult res;
  res.rank = rank;
  if (rows == cols && rows == 0) {
    res.determinant = 1;
  } else if (rows == cols && rank == rows) {
    res.determinant = sign * m(rows - 1, cols - 1);
  }
  return res;
}

int exact_rank(const IntMatrix& m) { return bareiss(m).rank; }

int64_t exact_determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("exact_determinant: matrix is not square");
  return bareiss(m).determinant;
}

}  // namespace circuitdoe
