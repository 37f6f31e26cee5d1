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

#ifndef CIRCUITDOE_CAMPAIGN_HPP_
#define CIRCUITDOE_CAMPAIGN_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "circuitdoe/circuit_engine.hpp"
#include "circuitdoe/factorial_model.hpp"
#include "circuitdoe/fraction_stats.hpp"
#include "json.hpp"

namespace circuitdoe {

struct CampaignConfig {
  FactorSpec spec;
  Coding coding = Coding::kEffects;
  // Empty means p+1, p+2, p+3 (capped at K).
  std::vector<int> ks;
  int runs = 500;
  uint64_t seed = 0;
  int threads = 1;  // 0 = hardware concurrency
};

std::vector<int> default_fraction_sizes(const FactorSpec& spec);

// One analysed fraction: the result of a single-restart exchange search.
struct FractionRecord {
  Fraction fraction;
  MoveProfile profile;
  double efficiency = 0.0;
};

// Efficiency rounded to hundredths; the grouping precision.
int64_t efficiency_centi(double efficiency);
std::string format_centi(int64_t centi);

struct Group {
  CountTable count_table{};
  Rational mean;
  Rational variance;
  int64_t efficiency_centi = 0;
  int64_t frequency = 0;
  // Distinct member fractions, sorted.
  std::vector<Fraction> members;
};

struct KSection {
  int k = 0;
  // Ascending efficiency, then count table.
  std::vector<Group> groups;
};

struct GroupedReport {
  std::string levels;  // "2,2,2,2"
  std::string coding = "effects";
  int runs = 0;
  uint64_t seed = 0;
  int64_t num_moves = 0;
  std::vector<KSection> sections;
};

// Groups by (count table, efficiency to 2 decimals). All records must
// share k and the model fingerprint (InvalidInputError otherwise).
// Empty input gives a section with k = 0 and no groups.
KSection group_fractions(std::span<const FractionRecord> records);

GroupedReport run_campaign(const CampaignConfig& config, const BasicMoveSet& moves);
GroupedReport run_campaign(const CampaignConfig& config);

// Within a section, a group with strictly higher efficiency never has a
// strictly higher variance. Groups tied on displayed efficiency are not
// ordered against each other.
bool variance_efficiency_holds(const KSection& section);
std::vector<std::pair<int, bool>> variance_efficiency_check(const GroupedReport& report);

// k,c0,c1,c2,c3,c4,mean,variance,efficiency,n
std::string report_to_csv(const GroupedReport& report);
nlohmann::json report_to_json(const GroupedReport& report);

// Flat row view shared by both encodings; members are not part of it.
struct ReportRow {
  int k = 0;
  CountTable count_table{};
  Rational mean;
  Rational variance;
  int64_t efficiency_centi = 0;
  int64_t frequency = 0;

  bool operator==(const ReportRow&) const = default;
};

std::vector<ReportRow> report_rows(const GroupedReport& report);
std::vector<ReportRow> parse_report_csv(std::string_view csv);
std::vector<ReportRow> parse_report_json(const nlohmann::json& j);

}  // namespace circuitdoe

#endif  // CIRCUITDOE_CAMPAIGN_HPP_
