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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "circuitdoe/error.hpp"
#include "circuitdoe/optimal_search.hpp"
#include "doctest.h"

using namespace circuitdoe;

namespace {

// Gaussian elimination over exact rationals, independent of Bareiss.
Rational rational_det(const IntMatrix& m) {
  const int n = m.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = Rational(m(i, j));
  Rational det(1);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && a[piv][c].numerator() == 0) ++piv;
    if (piv == n) return Rational(0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      const Rational f = a[r][c] / a[c][c];
      for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

// Partial-pivot LU in double.
double float_det(const IntMatrix& m) {
  const int n = m.rows();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = static_cast<double>(m(i, j));
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

std::vector<int> latin_square_points() {
  std::vector<int> pts;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) pts.push_back(9 * i + 3 * j + (i + j) % 3);
  return pts;
}

// Half fraction of 2^4 with x4 = x1 x2 x3 in +-1 terms.
std::vector<int> resolution_three_points() {
  std::vector<int> pts;
  for (int i = 0; i < 16; ++i) {
    const int a = (i >> 3) & 1, b = (i >> 2) & 1, c = (i >> 1) & 1, d = i & 1;
    if (d == (a ^ b ^ c)) pts.push_back(i);
  }
  return pts;
}

std::set<std::vector<int>> fraction_set(const std::vector<Fraction>& fs) {
  std::set<std::vector<int>> out;
  for (const auto& f : fs) out.insert(f.points());
  return out;
}

}  // namespace

TEST_SUITE("optimal_search") {
  TEST_CASE("full 2^4 design is orthogonal") {
    const auto model = model_matrix(FactorSpec{{2, 2, 2, 2}});
    std::vector<int> all(16);
    for (int i = 0; i < 16; ++i) all[i] = i;
    const auto v = d_efficiency(Fraction::of(model, all), model);
    CHECK(v.det_info == 16LL * 16 * 16 * 16 * 16);
    CHECK(v.efficiency == doctest::Approx(100.0).epsilon(1e-12));
  }

  TEST_CASE("3^3 Latin square") {
    const auto model = model_matrix(FactorSpec{{3, 3, 3}});
    const auto f = Fraction::of(model, latin_square_points());
    const auto v = d_efficiency(f, model);
    CHECK(v.det_info == 9LL * 27 * 27 * 27);
    const IntMatrix info = model.entries.select_rows(f.points()).gram();
    CHECK(rational_det(info) == Rational(v.det_info));
    CHECK(std::abs(v.efficiency - 62.45) <= 0.005);
    CHECK(format_fixed(v.efficiency, 2) == "62.45");
  }

  TEST_CASE("resolution III 8-run fraction of 2^4") {
    const auto model = model_matrix(FactorSpec{{2, 2, 2, 2}});
    const auto v = d_efficiency(Fraction::of(model, resolution_three_points()), model);
    CHECK(v.det_info == 8LL * 8 * 8 * 8 * 8);
    CHECK(v.efficiency == doctest::Approx(100.0).epsilon(1e-12));
  }

  TEST_CASE("singular fraction has efficiency 0") {
    const auto model = model_matrix(FactorSpec{{2, 2, 2, 2}});
    // Six points sharing the first factor's level: x1 aliases the intercept.
    const auto v = d_efficiency(Fraction::of(model, {0, 1, 2, 3, 4, 5}), model);
    CHECK(v.det_info == 0);
    CHECK(v.efficiency == 0.0);
    CHECK(v.rank == 4);
    CHECK(d_efficiency(Fraction::of(model, {3}), model).efficiency == 0.0);
  }

  TEST_CASE("exhaustive optima") {
    const auto m24 = model_matrix(FactorSpec{{2, 2, 2, 2}});
    CHECK(std::abs(exhaustive_best(m24, 6).best_efficiency() - 91.98) <= 0.005);
    CHECK(std::abs(exhaustive_best(m24, 7).best_efficiency() - 93.93) <= 0.005);
    const auto k8 = exhaustive_best(m24, 8);
    CHECK(std::abs(k8.best_efficiency() - 100.0) <= 0.005);
    CHECK(fraction_set(k8.optimal_fractions).count(resolution_three_points()) == 1);
    CHECK(k8.subsets_scanned == 12870);
    const auto m234 = model_matrix(FactorSpec{{2, 3, 4}});
    CHECK(std::abs(exhaustive_best(m234, 8).best_efficiency() - 51.71) <= 0.005);
  }

  TEST_CASE("exhaustive budget and ranges") {
    const auto m = model_matrix(FactorSpec{{2, 2, 2, 2, 2}});
    CHECK_THROWS_AS(exhaustive_best(m, 16), BudgetExceededError);
    try {
      exhaustive_best(m, 16, 1000);
    } catch (const BudgetExceededError& e) {
      CHECK(e.subsets() == doctest::Approx(601080390.0));
    }
    CHECK_THROWS_AS(exchange_search(m, 5, 1, 0), InvalidInputError);
    CHECK_THROWS_AS(exchange_search(m, 33, 1, 0), InvalidInputError);
    CHECK_THROWS_AS(exchange_search(m, 8, 0, 0), InvalidInputError);
  }

  TEST_CASE("exchange search reaches the reference optima") {
    const auto m24 = model_matrix(FactorSpec{{2, 2, 2, 2}});
    CHECK(std::abs(exchange_search(m24, 8, 500, 1).best_efficiency() - 100.0) <= 0.005);
    const auto m25 = model_matrix(FactorSpec{{2, 2, 2, 2, 2}});
    CHECK(std::abs(exchange_search(m25, 8, 500, 1).best_efficiency() - 100.0) <= 0.005);
    const auto m33 = model_matrix(FactorSpec{{3, 3, 3}});
    CHECK(std::abs(exchange_search(m33, 10, 500, 1).best_efficiency() - 61.02) <= 0.005);
  }

  TEST_CASE("exchange never beats the exhaustive optimum on 2^4") {
    const auto m = model_matrix(FactorSpec{{2, 2, 2, 2}});
    for (int k = 5; k <= 16; ++k) {
      const auto ex = exhaustive_best(m, k);
      const auto srch = exchange_search(m, k, 20, 3);
      CHECK(srch.best.det_info <= ex.best.det_info);
      CHECK(srch.best_efficiency() <= ex.best_efficiency() + 1e-12);
    }
  }

  TEST_CASE("restart bookkeeping and monotone traces") {
    const auto m = model_matrix(FactorSpec{{3, 3, 3}});
    const auto res = exchange_search(m, 9, 40, 11);
    REQUIRE(res.restarts.size() == 40);
    double best = 0;
    for (const auto& r : res.restarts) {
      best = std::max(best, r.efficiency);
      CHECK(r.trace.size() == static_cast<size_t>(r.iterations) + 1);
      CHECK(std::is_sorted(r.trace.begin(), r.trace.end()));
      CHECK(r.fraction.size() == 9);
      CHECK(r.seed == derive_seed(11, static_cast<uint64_t>(r.index)));
      // Recorded det matches a fresh evaluation.
      const auto f = Fraction::of(m, r.fraction);
      const int64_t det = d_efficiency(f, m).det_info;
      CHECK(det == r.det_info);
    }
    CHECK(res.best_efficiency() == best);
  }

  TEST_CASE("accepted swaps strictly improve (rank, det)") {
    const auto m = model_matrix(FactorSpec{{2, 3, 4}});
    std::mt19937 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> start(24);
      for (int i = 0; i < 24; ++i) start[i] = i;
      std::shuffle(start.begin(), start.end(), rng);
      start.resize(9);
      const auto rec = exchange_from(m, start);
      for (size_t i = 1; i < rec.trace.size(); ++i) {
        // det stays 0 only while rank is being repaired.
        if (rec.trace[i - 1] > 0) CHECK(rec.trace[i] > rec.trace[i - 1]);
      }
      // No improving swap remains.
      const auto f = Fraction::of(m, rec.fraction);
      for (int out : rec.fraction) {
        for (int in = 0; in < 24; ++in) {
          if (f.contains(in)) continue;
          auto pts = rec.fraction;
          std::replace(pts.begin(), pts.end(), out, in);
          CHECK(d_efficiency(Fraction::of(m, pts), m).det_info <= rec.det_info);
        }
      }
    }
  }

  TEST_CASE("reproducible given the seed") {
    const auto m = model_matrix(FactorSpec{{2, 2, 2, 2, 2}});
    const auto a = exchange_search(m, 9, 30, 42);
    const auto b = exchange_search(m, 9, 30, 42);
    SearchOptions threaded;
    threaded.threads = 3;
    const auto c = exchange_search(m, 9, 30, 42, threaded);
    CHECK(a.best_fraction == b.best_fraction);
    CHECK(a.best_fraction == c.best_fraction);
    for (size_t i = 0; i < a.restarts.size(); ++i) {
      CHECK(a.restarts[i].fraction == b.restarts[i].fraction);
      CHECK(a.restarts[i].fraction == c.restarts[i].fraction);
      CHECK(a.restarts[i].iterations == c.restarts[i].iterations);
    }
    const auto d = exchange_search(m, 9, 30, 43);
    bool differs = false;
    for (size_t i = 0; i < a.restarts.size(); ++i) differs = differs || a.restarts[i].seed != d.restarts[i].seed;
    CHECK(differs);
  }

  TEST_CASE("float determinant tracks the exact one") {
    for (const auto& levels : std::vector<std::vector<int>>{{2, 2, 2, 2}, {3, 3, 3}, {2, 3, 4}, {2, 2, 2, 2, 2}}) {
      const auto m = model_matrix(FactorSpec{levels});
      std::mt19937 rng(17);
      for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> pts(m.num_points());
        for (int i = 0; i < m.num_points(); ++i) pts[i] = i;
        std::shuffle(pts.begin(), pts.end(), rng);
        pts.resize(m.num_parameters() + static_cast<int>(rng() % 4));
        const IntMatrix info = m.entries.select_rows(pts).gram();
        const int64_t exact = exact_determinant(info);
        const double approx = float_det(info);
        if (exact == 0)
          CHECK(std::abs(approx) < 1e-6);
        else
          CHECK(std::abs(approx - static_cast<double>(exact)) <= 1e-9 * std::abs(static_cast<double>(exact)));
      }
    }
  }

  TEST_CASE("argmax sets are coding-equivariant") {
    for (const auto& [levels, k] : std::vector<std::pair<std::vector<int>, int>>{{{2, 2, 2, 2}, 6}, {{2, 3, 4}, 8}}) {
      const FactorSpec spec{levels};
      const auto e = exhaustive_best(model_matrix(spec, Coding::kEffects), k);
      const auto o = exhaustive_best(model_matrix(spec, Coding::kOrthonormal), k);
      CHECK(fraction_set(e.optimal_fractions) == fraction_set(o.optimal_fractions));
    }
    // Orthonormal efficiency is the true-scale value: full design gives 100.
    const auto o33 = model_matrix(FactorSpec{{3, 3, 3}}, Coding::kOrthonormal);
    std::vector<int> all(27);
    for (int i = 0; i < 27; ++i) all[i] = i;
    CHECK(d_efficiency(Fraction::of(o33, all), o33).efficiency == doctest::Approx(100.0));
  }
}
