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

#include "circuitdoe/optimal_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "circuitdoe/error.hpp"

namespace circuitdoe {

namespace {

struct Criterion {
  int rank = 0;
  int64_t det = 0;

  bool operator>(const Criterion& o) const { return rank != o.rank ? rank > o.rank : det > o.det; }
};

Criterion evaluate(const IntMatrix& info) {
  const auto res = bareiss(info);
  return {res.rank, res.determinant};
}

// info += sign * x_r x_r^T
void rank_one_update(IntMatrix& info, const IntMatrix& x, int row, int sign) {
  const int p = x.cols();
  for (int i = 0; i < p; ++i) {
    const int64_t xi = x(row, i) * sign;
    if (xi == 0) continue;
    for (int j = 0; j < p; ++j) info(i, j) = checked_add(info(i, j), checked_mul(xi, x(row, j)));
  }
}

IntMatrix information_matrix(const IntMatrix& x, std::span<const int> points) {
  IntMatrix info(x.cols(), x.cols());
  for (int r : points) rank_one_update(info, x, r, 1);
  return info;
}

// Unbiased draw from [0, bound).
uint64_t bounded(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

std::vector<int> random_subset(int num_points, int k, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> pool(num_points);
  for (int i = 0; i < num_points; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(bounded(rng, static_cast<uint64_t>(num_points - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

void check_size(const ModelMatrix& model, int k) {
  if (k < model.num_parameters() || k > model.num_points())
    throw InvalidInputError("fraction size k = " + std::to_string(k) + " outside [p, K] = [" +
                            std::to_string(model.num_parameters()) + ", " + std::to_string(model.num_points()) + "]");
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

double efficiency_from_det(int64_t det_info, const Rational& scale, int num_parameters, int fraction_size) {
  if (det_info <= 0 || fraction_size <= 0) return 0.0;
  const double log_det = std::log(static_cast<double>(det_info)) + std::log(to_double(scale));
  return 100.0 * std::exp(log_det / num_parameters) / fraction_size;
}

DCriterionValue d_efficiency(const Fraction& fraction, const ModelMatrix& model) {
  if (fraction.fingerprint() != model.fingerprint())
    throw InvalidInputError("fraction does not belong to this model");
  const auto c = evaluate(information_matrix(model.entries, fraction.points()));
  DCriterionValue v;
  v.rank = c.rank;
  v.det_info = c.det;
  v.efficiency = efficiency_from_det(c.det, model.determinant_scale(), model.num_parameters(), fraction.size());
  return v;
}

uint64_t derive_seed(uint64_t master, uint64_t stream) {
  auto mix = [](uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) ^ stream);
}

RestartRecord exchange_from(const ModelMatrix& model, std::vector<int> start) {
  const IntMatrix& x = model.entries;
  const int num_points = model.num_points();
  std::sort(start.begin(), start.end());
  std::vector<uint8_t> in_design(num_points, 0);
  for (int i : start) in_design[i] = 1;

  RestartRecord rec;
  IntMatrix info = information_matrix(x, start);
  Criterion current = evaluate(info);
  rec.trace.push_back(current.det);
  std::vector<int>& design = start;
  for (;;) {
    Criterion best = current;
    int best_out = -1, best_in = -1;
    for (size_t pos = 0; pos < design.size(); ++pos) {
      const int out = design[pos];
      IntMatrix reduced = info;
      rank_one_update(reduced, x, out, -1);
      for (int in = 0; in < num_points; ++in) {
        if (in_design[in]) continue;
        IntMatrix trial = reduced;
        rank_one_update(trial, x, in, 1);
        const Criterion c = evaluate(trial);
        if (c > best) {
          best = c;
          best_out = static_cast<int>(pos);
          best_in = in;
        }
      }
    }
    if (best_out < 0) break;
    rank_one_update(info, x, design[best_out], -1);
    rank_one_update(info, x, best_in, 1);
    in_design[design[best_out]] = 0;
    in_design[best_in] = 1;
    design[best_out] = best_in;
    std::sort(design.begin(), design.end());
    current = best;
    ++rec.iterations;
    rec.trace.push_back(current.det);
  }
  rec.det_info = current.rank == model.num_parameters() ? current.det : 0;
  rec.efficiency =
      efficiency_from_det(rec.det_info, model.determinant_scale(), model.num_parameters(), static_cast<int>(design.size()));
  rec.fraction = std::move(design);
  return rec;
}

SearchResult exchange_search(const ModelMatrix& model, int k, int restarts, uint64_t seed,
                             const SearchOptions& options) {
  check_size(model, k);
  if (restarts < 1) throw InvalidInputError("restarts must be >= 1");
  SearchResult result;
  result.restarts.resize(restarts);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next.fetch_add(1); r < restarts; r = next.fetch_add(1)) {
      const uint64_t s = derive_seed(seed, static_cast<uint64_t>(r));
      RestartRecord rec = exchange_from(model, random_subset(model.num_points(), k, s));
      rec.index = r;
      rec.seed = s;
      if (!options.record_trace) rec.trace.clear();
      result.restarts[r] = std::move(rec);
    }
  };
  const int threads = std::min(resolve_threads(options.threads), restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // Highest det wins; earliest restart breaks ties.
  const RestartRecord* best = &result.restarts.front();
  for (const auto& rec : result.restarts)
    if (rec.det_info > best->det_info) best = &rec;
  result.best_fraction = Fraction::of(model, best->fraction);
  result.best = d_efficiency(result.best_fraction, model);
  result.subsets_scanned = 0;
  return result;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return std::round(out);
}

SearchResult exhaustive_best(const ModelMatrix& model, int k, double budget) {
  const int num_points = model.num_points();
  if (k < 1 || k > num_points) throw InvalidInputError("fraction size k = " + std::to_string(k) + " out of range");
  const double count = binomial(num_points, k);
  if (count > budget)
    throw BudgetExceededError("exhaustive scan of C(" + std::to_string(num_points) + ", " + std::to_string(k) +
                                  ") subsets exceeds the budget",
                              count);
  const IntMatrix& x = model.entries;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  int64_t best_det = -1;
  std::vector<std::vector<int>> optima;
  SearchResult result;
  for (;;) {
    ++result.subsets_scanned;
    const Criterion c = evaluate(information_matrix(x, idx));
    const int64_t det = c.rank == model.num_parameters() ? c.det : 0;
    if (det > best_det) {
      best_det = det;
      optima.clear();
    }
    if (det == best_det) optima.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == num_points - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  for (auto& f : optima) result.optimal_fractions.push_back(Fraction::of(model, std::move(f)));
  result.best_fraction = result.optimal_fractions.front();
  result.best = d_efficiency(result.best_fraction, model);
  return result;
}

}  // namespace circuitdoe
