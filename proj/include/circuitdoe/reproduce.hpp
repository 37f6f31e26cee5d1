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

#ifndef CIRCUITDOE_REPRODUCE_HPP_
#define CIRCUITDOE_REPRODUCE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "circuitdoe/campaign.hpp"

namespace circuitdoe {

// One published group: count table, mean, variance and efficiency as
// printed (two decimals at most), plus the published frequency, which is
// informational only.
struct ReferenceRow {
  int k = 0;
  CountTable count_table{};
  const char* mean = "";
  const char* variance = "";
  const char* efficiency = "";
  int frequency = 0;
};

struct ReferenceTable {
  int id = 0;
  FactorSpec spec;
  std::vector<ReferenceRow> rows;
};

// Tables 1-4: the 2^4, 2^5, 3^3 and 2x3x4 scenarios. Throws
// InvalidSpecError for any other id.
const ReferenceTable& reference_table(int id);

struct RowComparison {
  ReferenceRow expected;
  bool realized = false;
  // Frequency of the matching group, 0 when not realized.
  int64_t observed_frequency = 0;
};

struct ReproductionOutcome {
  int table_id = 0;
  GroupedReport report;
  std::vector<RowComparison> rows;
  std::vector<std::pair<int, bool>> variance_check;

  bool all_realized() const;
  int realized_count() const;
};

// True when `group` shows the published count table, and its mean,
// variance and efficiency print to the published values at two decimals.
bool group_matches(const Group& group, const ReferenceRow& row);

ReproductionOutcome compare_with_reference(int table_id, GroupedReport report);
ReproductionOutcome reproduce_table(int table_id, int runs = 500, uint64_t seed = 0, int threads = 1);

// Human-readable per-row comparison, one line per published row.
std::string format_comparison(const ReproductionOutcome& outcome);

}  // namespace circuitdoe

#endif  // CIRCUITDOE_REPRODUCE_HPP_
