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

#include "circuitdoe/reproduce.hpp"

#include <sstream>

#include "circuitdoe/error.hpp"

namespace circuitdoe {

namespace {

std::vector<ReferenceTable> build_tables() {
  std::vector<ReferenceTable> t;
  t.push_back({1, FactorSpec{{2, 2, 2, 2}},
               {
                   {6, {9, 39, 45, 7, 0}, "1.5", "0.57", "91.98", 500},
                   {7, {6, 22, 66, 3, 3}, "1.75", "0.55", "93.93", 500},
                   {8, {3, 18, 58, 18, 3}, "2", "0.60", "94.41", 117},
                   {8, {6, 0, 88, 0, 6}, "2", "0.48", "100.00", 383},
               }});
  t.push_back({2, FactorSpec{{2, 2, 2, 2, 2}},
               {
                   {7, {249, 321, 141, 9, 0}, "0.88", "0.58", "83.87", 12},
                   {7, {238, 342, 132, 8, 0}, "0.88", "0.54", "88.18", 20},
                   {7, {230, 353, 135, 1, 1}, "0.88", "0.51", "90.71", 468},
                   {8, {194, 348, 162, 16, 0}, "1", "0.58", "90.86", 35},
                   {8, {191, 344, 182, 0, 3}, "1", "0.56", "95.32", 182},
                   {8, {186, 352, 180, 0, 2}, "1", "0.53", "100.00", 283},
                   {9, {157, 335, 212, 13, 3}, "1.12", "0.61", "95.10", 82},
                   {9, {155, 339, 209, 15, 2}, "1.12", "0.60", "97.58", 418},
               }});
  t.push_back({3, FactorSpec{{3, 3, 3}},
               {
                   {8, {48, 108, 81, 6, 0}, "1.19", "0.60", "52.59", 19},
                   {8, {40, 122, 77, 4, 0}, "1.19", "0.51", "55.72", 185},
                   {8, {39, 120, 84, 0, 0}, "1.19", "0.47", "56.67", 296},
                   {9, {29, 112, 94, 8, 0}, "1.33", "0.53", "57.95", 192},
                   {9, {27, 108, 108, 0, 0}, "1.33", "0.44", "62.45", 308},
                   {10, {21, 96, 114, 12, 0}, "1.48", "0.52", "61.02", 500},
               }});
  t.push_back({4, FactorSpec{{2, 3, 4}},
               {
                   {8, {20, 80, 70, 4, 0}, "1.33", "0.50", "51.71", 332},
                   {8, {21, 76, 76, 0, 1}, "1.33", "0.50", "51.71", 168},
                   {9, {14, 68, 84, 7, 1}, "1.50", "0.53", "52.80", 246},
                   {9, {14, 69, 81, 10, 0}, "1.50", "0.53", "52.80", 254},
                   {10, {8, 60, 88, 18, 0}, "1.67", "0.52", "54.25", 157},
                   {10, {9, 56, 94, 14, 1}, "1.67", "0.52", "54.25", 286},
                   {10, {11, 48, 106, 6, 3}, "1.67", "0.52", "54.25", 57},
               }});
  return t;
}

// "1.5" -> 150, "2" -> 200, "0.88" -> 88.
int64_t printed_centi(const char* text) {
  const std::string s(text);
  const auto dot = s.find('.');
  const int64_t whole = std::stoll(s.substr(0, dot));
  int64_t frac = 0;
  if (dot != std::string::npos) {
    std::string digits = s.substr(dot + 1);
    digits.resize(2, '0');
    frac = std::stoll(digits);
  }
  return whole * 100 + frac;
}

}  // namespace

const ReferenceTable& reference_table(int id) {
  static const std::vector<ReferenceTable> tables = build_tables();
  if (id < 1 || id > static_cast<int>(tables.size()))
    throw InvalidSpecError("unknown table id " + std::to_string(id) + " (expected 1..4)");
  return tables[id - 1];
}

bool group_matches(const Group& group, const ReferenceRow& row) {
  return group.count_table == row.count_table && round_scaled(group.mean, 2) == printed_centi(row.mean) &&
         round_scaled(group.variance, 2) == printed_centi(row.variance) &&
         group.efficiency_centi == printed_centi(row.efficiency);
}

bool ReproductionOutcome::all_realized() const { return realized_count() == static_cast<int>(rows.size()); }

int ReproductionOutcome::realized_count() const {
  int n = 0;
  for (const auto& r : rows) n += r.realized ? 1 : 0;
  return n;
}

ReproductionOutcome compare_with_reference(int table_id, GroupedReport report) {
  const ReferenceTable& ref = reference_table(table_id);
  ReproductionOutcome outcome;
  outcome.table_id = table_id;
  for (const auto& row : ref.rows) {
    RowComparison cmp{row, false, 0};
    for (const auto& section : report.sections) {
      if (section.k != row.k) continue;
      for (const auto& g : section.groups) {
        if (group_matches(g, row)) {
          cmp.realized = true;
          cmp.observed_frequency = g.frequency;
        }
      }
    }
    outcome.rows.push_back(cmp);
  }
  outcome.variance_check = variance_efficiency_check(report);
  outcome.report = std::move(report);
  return outcome;
}

ReproductionOutcome reproduce_table(int table_id, int runs, uint64_t seed, int threads) {
  const ReferenceTable& ref = reference_table(table_id);
  CampaignConfig config;
  config.spec = ref.spec;
  config.runs = runs;
  config.seed = seed;
  config.threads = threads;
  return compare_with_reference(table_id, run_campaign(config));
}

std::string format_comparison(const ReproductionOutcome& outcome) {
  std::ostringstream out;
  const ReferenceTable& ref = reference_table(outcome.table_id);
  out << "table " << outcome.table_id << " (levels " << ref.spec.to_string() << ", " << outcome.report.runs
      << " runs per k)\n";
  for (const auto& r : outcome.rows) {
    const auto& e = r.expected;
    out << (r.realized ? "  [match]   " : "  [MISSING] ") << "k=" << e.k << " table=(";
    for (int v = 0; v < 5; ++v) out << (v ? "," : "") << e.count_table[v];
    out << ") m=" << e.mean << " var=" << e.variance << " E=" << e.efficiency << "  n: published " << e.frequency
        << ", observed " << r.observed_frequency << '\n';
  }
  for (const auto& [k, ok] : outcome.variance_check)
    out << "  variance non-increasing in efficiency, k=" << k << ": " << (ok ? "yes" : "NO") << '\n';
  out << outcome.realized_count() << "/" << outcome.rows.size() << " published rows realized\n";
  return out.str();
}

}  // namespace circuitdoe
