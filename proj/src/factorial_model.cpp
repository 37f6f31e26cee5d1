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

#include "circuitdoe/factorial_model.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "circuitdoe/error.hpp"

namespace circuitdoe {

FactorSpec FactorSpec::parse(std::string_view text) {
  FactorSpec spec;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
      throw InvalidSpecError("invalid factor level list: '" + std::string(text) + "'");
    spec.levels.push_back(value);
    pos = comma + 1;
  }
  spec.validate();
  return spec;
}

void FactorSpec::validate() const {
  if (levels.empty()) throw InvalidSpecError("factor spec needs at least one factor");
  int64_t k = 1;
  for (int s : levels) {
    if (s < 2) throw InvalidSpecError("every factor needs at least 2 levels, got " + std::to_string(s));
    k = checked_mul(k, s);
    if (k > (1 << 24)) throw InvalidSpecError("full factorial too large: " + to_string());
  }
}

int FactorSpec::num_points() const {
  int k = 1;
  for (int s : levels) k *= s;
  return k;
}

int FactorSpec::num_parameters() const {
  int p = 1;
  for (int s : levels) p += s - 1;
  return p;
}

std::string FactorSpec::to_string() const {
  std::string out;
  for (size_t i = 0; i < levels.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(levels[i]);
  }
  return out;
}

int FactorialDesign::index_of(const std::vector<int>& tuple) const {
  if (tuple.size() != spec.levels.size())
    throw InvalidInputError("level tuple has " + std::to_string(tuple.size()) + " entries, expected " +
                            std::to_string(spec.levels.size()));
  int index = 0;
  for (size_t f = 0; f < tuple.size(); ++f) {
    if (tuple[f] < 0 || tuple[f] >= spec.levels[f])
      throw InvalidInputError("level " + std::to_string(tuple[f]) + " out of range for factor " + std::to_string(f));
    index = index * spec.levels[f] + tuple[f];
  }
  return index;
}

std::string_view coding_name(Coding c) { return c == Coding::kEffects ? "effects" : "orthonormal"; }

Coding parse_coding(std::string_view name) {
  if (name == "effects") return Coding::kEffects;
  if (name == "orthonormal") return Coding::kOrthonormal;
  throw InvalidSpecError("unknown coding '" + std::string(name) + "' (expected effects|orthonormal)");
}

FactorialDesign full_factorial(const FactorSpec& spec) {
  spec.validate();
  FactorialDesign design{spec, {}};
  const int k = spec.num_points();
  const size_t m = spec.levels.size();
  design.points.reserve(k);
  std::vector<int> tuple(m, 0);
  for (int i = 0; i < k; ++i) {
    design.points.push_back(tuple);
    for (size_t f = m; f-- > 0;) {
      if (++tuple[f] < spec.levels[f]) break;
      tuple[f] = 0;
    }
  }
  return design;
}

ModelMatrix model_matrix(const FactorialDesign& design, Coding coding) {
  const FactorSpec& spec = design.spec;
  ModelMatrix model;
  model.design = design;
  model.coding = coding;
  model.entries = IntMatrix(design.size(), spec.num_parameters());
  model.column_scale_sq.assign(spec.num_parameters(), Rational(1));
  for (int r = 0; r < design.size(); ++r) {
    model.entries(r, 0) = 1;
    int col = 1;
    for (size_t f = 0; f < spec.levels.size(); ++f) {
      const int s = spec.levels[f];
      const int level = design.points[r][f];
      for (int c = 0; c < s - 1; ++c, ++col) {
        if (coding == Coding::kEffects) {
          model.entries(r, col) = level == c ? 1 : (level == s - 1 ? -1 : 0);
        } else {
          // Helmert contrast number h = c + 1.
          const int h = c + 1;
          model.entries(r, col) = level < h ? 1 : (level == h ? -h : 0);
        }
      }
    }
  }
  if (coding == Coding::kOrthonormal) {
    int col = 1;
    for (int s : spec.levels) {
      for (int h = 1; h < s; ++h, ++col) model.column_scale_sq[col] = Rational(s, h * (h + 1));
    }
  }
  return model;
}

ModelMatrix model_matrix(const FactorSpec& spec, Coding coding) { return model_matrix(full_factorial(spec), coding); }

double ModelMatrix::value(int row, int col) const {
  const double v = static_cast<double>(entries(row, col));
  if (coding == Coding::kEffects) return v;
  return v * std::sqrt(to_double(column_scale_sq[col]));
}

std::string model_fingerprint(const FactorSpec& spec) {
  const std::string key = "main-effects:" + spec.to_string();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : key) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ModelMatrix::fingerprint() const { return model_fingerprint(design.spec); }

Rational ModelMatrix::determinant_scale() const {
  Rational out(1);
  for (const auto& s : column_scale_sq) out *= s;
  return out;
}

nlohmann::json ModelMatrix::to_json() const {
  nlohmann::json j;
  j["levels"] = design.spec.levels;
  j["coding"] = std::string(coding_name(coding));
  j["points"] = design.points;
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < num_points(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < num_parameters(); ++c) {
      if (coding == Coding::kEffects)
        row.push_back(entries(r, c));
      else
        row.push_back(value(r, c));
    }
    rows.push_back(std::move(row));
  }
  j["X"] = std::move(rows);
  return j;
}

}  // namespace circuitdoe
