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

#include "circuitdoe/circuit_engine.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "circuitdoe/error.hpp"

namespace circuitdoe {

Circuit canonicalize(std::span<const std::pair<int, int64_t>> entries) {
  std::vector<std::pair<int, int64_t>> sorted;
  sorted.reserve(entries.size());
  for (const auto& e : entries)
    if (e.second != 0) sorted.push_back(e);
  if (sorted.empty()) throw InvalidInputError("canonicalize: zero vector has no circuit form");
  std::sort(sorted.begin(), sorted.end());
  int64_t g = 0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i].first == sorted[i - 1].first)
      throw InvalidInputError("canonicalize: repeated index " + std::to_string(sorted[i].first));
    g = std::gcd(g, sorted[i].second);
  }
  const int64_t divisor = sorted.front().second < 0 ? -g : g;
  Circuit c;
  c.support.reserve(sorted.size());
  c.coef.reserve(sorted.size());
  for (const auto& [idx, v] : sorted) {
    c.support.push_back(idx);
    c.coef.push_back(v / divisor);
  }
  return c;
}

Circuit canonicalize(std::span<const int> support, std::span<const int64_t> coef) {
  if (support.size() != coef.size()) throw InvalidInputError("canonicalize: support/coefficient length mismatch");
  std::vector<std::pair<int, int64_t>> entries;
  entries.reserve(support.size());
  for (size_t i = 0; i < support.size(); ++i) entries.emplace_back(support[i], coef[i]);
  return canonicalize(entries);
}

std::map<int, int64_t> CircuitBasis::support_size_histogram() const {
  std::map<int, int64_t> h;
  for (const auto& c : circuits) ++h[c.support_size()];
  return h;
}

std::vector<int> CircuitBasis::support_sizes() const {
  std::vector<int> b;
  b.reserve(circuits.size());
  for (const auto& c : circuits) b.push_back(c.support_size());
  return b;
}

namespace {

// Depth-first search over row-independent point sets S (increasing indices).
// Every candidate x > max(S) carries a residue row of width 2p + 1:
//   [ r (p entries) | comb (p entries, first |S| used) | scale ]
// meaning  scale * X_x - sum_t comb[t] * X_{S[t]} = r,  with r reduced
// against the echelon rows of S. r = 0 exactly when S + {x} is dependent;
// the circuit is supported on all of S + {x} iff every comb[t] != 0.
class DepthFirstEnumerator {
 public:
  DepthFirstEnumerator(const IntMatrix& x, int support_limit)
      : x_(x),
        num_points_(x.rows()),
        p_(x.cols()),
        width_(2 * x.cols() + 1),
        support_limit_(support_limit),
        rows_(p_ + 2),
        points_(p_ + 2) {
    for (auto& level : rows_) level.resize(static_cast<size_t>(num_points_) * width_);
    for (auto& level : points_) level.reserve(num_points_);
    chosen_.reserve(p_ + 1);
    // Level 0: raw rows, empty combination.
    for (int i = 0; i < num_points_; ++i) {
      int64_t* row = slot(0, i);
      std::fill(row, row + width_, 0);
      for (int c = 0; c < p_; ++c) row[c] = x_(i, c);
      row[width_ - 1] = 1;
    }
  }

  // Circuits of size 1 (zero rows of X).
  void emit_zero_rows(std::vector<Circuit>& out) {
    for (int i = 0; i < num_points_; ++i) {
      bool zero = true;
      for (int c = 0; c < p_; ++c) zero = zero && x_(i, c) == 0;
      if (zero) out.push_back(Circuit{{i}, {1}});
    }
  }

  // Explores every independent set whose smallest element is `first`.
  void run_branch(int first, std::vector<Circuit>& out) {
    out_ = &out;
    bool zero = true;
    for (int c = 0; c < p_; ++c) zero = zero && x_(first, c) == 0;
    if (zero) return;
    chosen_.clear();
    chosen_.push_back(first);
    const int64_t* pivot_row = slot(0, first);
    points_[1].clear();
    for (int x = first + 1; x < num_points_; ++x) {
      const int64_t* row = slot(0, x);
      bool nonzero = false;
      for (int c = 0; c < p_; ++c) nonzero = nonzero || row[c] != 0;
      if (!nonzero) continue;
      reduce_into(0, pivot_row, row, 1, x);
    }
    if (!points_[1].empty()) expand(1);
  }

 private:
  int64_t* slot(int level, int i) { return rows_[level].data() + static_cast<size_t>(i) * width_; }

  static int64_t mul(int64_t a, int64_t b) { return checked_mul(a, b); }
  static int64_t sub(int64_t a, int64_t b) {
    int64_t out;
    if (__builtin_sub_overflow(a, b, &out)) throw std::overflow_error("circuit enumeration: overflow");
    return out;
  }

  // Reduces candidate x (residue `row` at `depth`, combination length `depth`)
  // against the newest chosen point (residue `pivot_row`). Emits a circuit if
  // the reduced residue vanishes with full combination support; otherwise
  // stores the residue at level `depth + 1` when that level will be expanded.
  void reduce_into(int depth, const int64_t* pivot_row, const int64_t* row, int child_level, int x) {
    int q = 0;
    while (pivot_row[q] == 0) ++q;
    const int64_t a = pivot_row[q];
    const int64_t b = row[q];
    int64_t buf[64];
    std::vector<int64_t> heap;
    int64_t* out = buf;
    if (width_ > 64) {
      heap.resize(width_);
      out = heap.data();
    }
    const int comb_base = p_;
    const int scale_at = width_ - 1;
    if (b == 0) {
      std::copy(row, row + width_, out);
      out[comb_base + depth] = 0;
    } else {
      for (int c = 0; c < p_; ++c) out[c] = sub(mul(a, row[c]), mul(b, pivot_row[c]));
      for (int t = 0; t < depth; ++t)
        out[comb_base + t] = sub(mul(a, row[comb_base + t]), mul(b, pivot_row[comb_base + t]));
      out[comb_base + depth] = mul(b, pivot_row[scale_at]);
      for (int t = depth + 1; t < p_; ++t) out[comb_base + t] = 0;
      out[scale_at] = mul(a, row[scale_at]);
      int64_t g = 0;
      for (int c = 0; c < width_; ++c) g = std::gcd(g, out[c]);
      if (out[scale_at] < 0) g = -g;
      if (g != 1)
        for (int c = 0; c < width_; ++c) out[c] /= g;
    }
    bool dependent = true;
    for (int c = 0; c < p_; ++c) dependent = dependent && out[c] == 0;
    const int set_size = depth + 1;  // |S| after adding the pivot point
    if (dependent) {
      for (int t = 0; t <= depth; ++t)
        if (out[comb_base + t] == 0) return;
      std::vector<int> support(chosen_.begin(), chosen_.end());
      support.push_back(x);
      std::vector<int64_t> coef(set_size + 1);
      for (int t = 0; t < set_size; ++t) coef[t] = -out[comb_base + t];
      coef[set_size] = out[scale_at];
      out_->push_back(canonicalize(support, coef));
      return;
    }
    // Children of the node S + {x} yield circuits of size |S| + 2.
    if (set_size + 2 > support_limit_) return;
    const int n = static_cast<int>(points_[child_level].size());
    std::copy(out, out + width_, slot(child_level, n));
    points_[child_level].push_back(x);
  }

  // Node with chosen_ of size `depth`; level `depth` holds its independent
  // candidates.
  void expand(int depth) {
    const int n = static_cast<int>(points_[depth].size());
    for (int i = 0; i < n; ++i) {
      const int y = points_[depth][i];
      chosen_.push_back(y);
      const int child = depth + 1;
      points_[child].clear();
      const int64_t* pivot_row = slot(depth, i);
      for (int j = i + 1; j < n; ++j) reduce_into(depth, pivot_row, slot(depth, j), child, points_[depth][j]);
      if (!points_[child].empty()) expand(child);
      chosen_.pop_back();
    }
  }

  const IntMatrix& x_;
  int num_points_;
  int p_;
  int width_;
  int support_limit_;
  std::vector<std::vector<int64_t>> rows_;
  std::vector<std::vector<int>> points_;
  std::vector<int> chosen_;
  std::vector<Circuit>* out_ = nullptr;
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

CircuitBasis enumerate_circuits(const ModelMatrix& model, const EnumerationOptions& options) {
  const IntMatrix& x = model.entries;
  const int num_points = x.rows();
  const int p = x.cols();
  const int limit = options.max_support_size > 0 ? options.max_support_size : p + 1;

  std::vector<std::vector<Circuit>> per_branch(num_points);
  std::atomic<int> next{0};
  const int threads = std::min(resolve_threads(options.threads), std::max(1, num_points));
  auto worker = [&] {
    DepthFirstEnumerator dfs(x, limit);
    for (int i = next.fetch_add(1); i < num_points; i = next.fetch_add(1)) dfs.run_branch(i, per_branch[i]);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  CircuitBasis basis;
  basis.num_points = num_points;
  basis.num_parameters = p;
  basis.fingerprint = model.fingerprint();
  basis.max_support_size = options.max_support_size;
  if (limit >= 1) DepthFirstEnumerator(x, limit).emit_zero_rows(basis.circuits);
  size_t total = basis.circuits.size();
  for (const auto& b : per_branch) total += b.size();
  basis.circuits.reserve(total);
  for (auto& b : per_branch) {
    std::move(b.begin(), b.end(), std::back_inserter(basis.circuits));
    b.clear();
    b.shrink_to_fit();
  }
  std::sort(basis.circuits.begin(), basis.circuits.end());
  return basis;
}

BasicMoveSet basic_moves(const CircuitBasis& basis) {
  BasicMoveSet out;
  out.num_points = basis.num_points;
  out.fingerprint = basis.fingerprint;
  for (const auto& c : basis.circuits)
    if (c.support_size() == 4) out.moves.push_back(c);
  return out;
}

BasicMoveSet enumerate_basic_moves(const ModelMatrix& model, int threads) {
  EnumerationOptions options;
  options.threads = threads;
  options.max_support_size = 4;
  return basic_moves(enumerate_circuits(model, options));
}

std::vector<int64_t> apply_model_transpose(const ModelMatrix& model, const Circuit& circuit) {
  const IntMatrix& x = model.entries;
  std::vector<int64_t> out(x.cols(), 0);
  for (size_t i = 0; i < circuit.support.size(); ++i) {
    const int r = circuit.support[i];
    if (r < 0 || r >= x.rows()) throw InvalidInputError("circuit index out of range");
    for (int c = 0; c < x.cols(); ++c) out[c] = checked_add(out[c], checked_mul(x(r, c), circuit.coef[i]));
  }
  return out;
}

bool verify_circuit(const Circuit& candidate, const ModelMatrix& model) {
  const auto& s = candidate.support;
  if (s.empty() || s.size() != candidate.coef.size()) return false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= model.num_points()) return false;
    if (i > 0 && s[i] <= s[i - 1]) return false;
    if (candidate.coef[i] == 0) return false;
  }
  for (int64_t v : apply_model_transpose(model, candidate))
    if (v != 0) return false;
  // A f = 0 with full support on S means rank(X_S) <= |S| - 1; equality
  // leaves a one-dimensional kernel, so no proper subset is dependent.
  return exact_rank(model.entries.select_rows(s)) == static_cast<int>(s.size()) - 1;
}

std::optional<Circuit> circuit_on_support(const ModelMatrix& model, std::span<const int> support) {
  const int n = static_cast<int>(support.size());
  if (n == 0) return std::nullopt;
  // A_S = X_S^T is p x n; pick n - 1 independent rows of it.
  const IntMatrix a_s = model.entries.select_rows(support).transpose();
  if (exact_rank(a_s) != n - 1) return std::nullopt;
  std::vector<int> picked;
  IntMatrix basis_rows(0, n);
  for (int r = 0; r < a_s.rows() && static_cast<int>(picked.size()) < n - 1; ++r) {
    std::vector<int> trial = picked;
    trial.push_back(r);
    if (exact_rank(a_s.select_rows(trial)) == static_cast<int>(trial.size())) picked = std::move(trial);
  }
  const IntMatrix m = a_s.select_rows(picked);
  std::vector<int64_t> coef(n);
  for (int j = 0; j < n; ++j) {
    IntMatrix minor(n - 1, n - 1);
    for (int r = 0; r < n - 1; ++r)
      for (int c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r, cc++) = m(r, c);
    const int64_t d = n == 1 ? 1 : exact_determinant(minor);
    coef[j] = (j % 2 == 0) ? d : -d;
  }
  for (int64_t v : coef)
    if (v == 0) return std::nullopt;
  return canonicalize(support, coef);
}

}  // namespace circuitdoe
