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

#include <vector>

#include "circuitdoe/campaign.hpp"
#include "circuitdoe/error.hpp"
#include "circuitdoe/reproduce.hpp"
#include "doctest.h"

using namespace circuitdoe;

namespace {

Group make_group(CountTable table, int64_t centi) {
  Group g;
  g.count_table = table;
  std::tie(g.mean, g.variance) = moments_from_counts(table);
  g.efficiency_centi = centi;
  g.frequency = 1;
  return g;
}

FractionRecord record(const ModelMatrix& model, const BasicMoveSet& moves, std::vector<int> pts, double eff) {
  FractionRecord r;
  r.fraction = Fraction::of(model, std::move(pts));
  r.profile = intersection_counts(r.fraction, moves);
  r.efficiency = eff;
  return r;
}

}  // namespace

TEST_SUITE("campaign") {
  TEST_CASE("default fraction sizes") {
    CHECK(default_fraction_sizes(FactorSpec{{2, 2, 2, 2}}) == std::vector<int>{6, 7, 8});
    CHECK(default_fraction_sizes(FactorSpec{{3, 3, 3}}) == std::vector<int>{8, 9, 10});
    CHECK(default_fraction_sizes(FactorSpec{{2, 2}}) == std::vector<int>{4});
  }

  TEST_CASE("group_fractions") {
    const auto model = model_matrix(FactorSpec{{2, 2, 2, 2}});
    const auto moves = enumerate_basic_moves(model);
    const std::vector<FractionRecord> twins{record(model, moves, {0, 3, 5, 6, 9, 10}, 91.98),
                                            record(model, moves, {0, 3, 5, 6, 9, 10}, 91.98)};
    const auto section = group_fractions(twins);
    CHECK(section.k == 6);
    REQUIRE(section.groups.size() == 1);
    CHECK(section.groups[0].frequency == 2);
    CHECK(section.groups[0].members.size() == 1);

    CHECK(group_fractions(std::vector<FractionRecord>{}).groups.empty());

    const std::vector<FractionRecord> mixed{record(model, moves, {0, 1, 2, 3, 4, 5}, 0),
                                            record(model, moves, {0, 1, 2, 3, 4, 5, 6}, 0)};
    CHECK_THROWS_AS(group_fractions(mixed), InvalidInputError);

    // Same table, efficiencies differing below display precision -> one group.
    const std::vector<FractionRecord> close{record(model, moves, {0, 3, 5, 6, 9, 10}, 91.981),
                                            record(model, moves, {0, 3, 5, 6, 9, 10}, 91.9849)};
    CHECK(group_fractions(close).groups.size() == 1);
  }

  TEST_CASE("variance-efficiency check") {
    KSection t3;
    t3.k = 8;
    t3.groups = {make_group({48, 108, 81, 6, 0}, 5259), make_group({40, 122, 77, 4, 0}, 5572),
                 make_group({39, 120, 84, 0, 0}, 5667)};
    CHECK(variance_efficiency_holds(t3));

    KSection t4;
    t4.k = 9;
    t4.groups = {make_group({14, 68, 84, 7, 1}, 5280), make_group({14, 69, 81, 10, 0}, 5280)};
    CHECK(variance_efficiency_holds(t4));

    KSection bad;
    bad.k = 8;
    bad.groups = {make_group({39, 120, 84, 0, 0}, 5259), make_group({48, 108, 81, 6, 0}, 5667)};
    CHECK_FALSE(variance_efficiency_holds(bad));

    GroupedReport report;
    report.sections = {t3, bad};
    const auto checks = variance_efficiency_check(report);
    REQUIRE(checks.size() == 2);
    CHECK(checks[0].second);
    CHECK_FALSE(checks[1].second);
  }

  TEST_CASE("single run gives a single group") {
    CampaignConfig config;
    config.spec = FactorSpec{{2, 2, 2, 2}};
    config.ks = {7};
    config.runs = 1;
    const auto report = run_campaign(config);
    REQUIRE(report.sections.size() == 1);
    REQUIRE(report.sections[0].groups.size() == 1);
    CHECK(report.sections[0].groups[0].frequency == 1);
  }

  TEST_CASE("2^4 k=6 campaign collapses to the optimum profile") {
    CampaignConfig config;
    config.spec = FactorSpec{{2, 2, 2, 2}};
    config.ks = {6};
    config.runs = 500;
    config.seed = 3;
    const auto report = run_campaign(config);
    REQUIRE(report.sections[0].groups.size() == 1);
    const auto& g = report.sections[0].groups[0];
    CHECK(g.count_table == CountTable{9, 39, 45, 7, 0});
    CHECK(format_centi(g.efficiency_centi) == "91.98");
    CHECK(g.frequency == 500);
  }

  TEST_CASE("2x3x4 k=10: three profiles share mean, variance and efficiency") {
    CampaignConfig config;
    config.spec = FactorSpec{{2, 3, 4}};
    config.ks = {10};
    config.runs = 300;
    config.seed = 5;
    const auto report = run_campaign(config);
    int matched = 0;
    for (const auto& g : report.sections[0].groups) {
      if (format_centi(g.efficiency_centi) != "54.25") continue;
      CHECK(format_fixed(g.mean, 2) == "1.67");
      CHECK(format_fixed(g.variance, 2) == "0.52");
      ++matched;
    }
    CHECK(matched == 3);
  }

  TEST_CASE("mean constant across groups and recomputable from tables") {
    CampaignConfig config;
    config.spec = FactorSpec{{2, 2, 2, 2, 2}};
    config.runs = 150;
    config.seed = 9;
    const auto report = run_campaign(config);
    for (const auto& s : report.sections) {
      for (const auto& g : s.groups) {
        CHECK(g.mean == Rational(4 * s.k, 32));
        const auto [m, v] = moments_from_counts(g.count_table);
        CHECK(m == g.mean);
        CHECK(v == g.variance);
      }
    }
  }

  TEST_CASE("csv and json encode the same rows; same seed same bytes") {
    CampaignConfig config;
    config.spec = FactorSpec{{3, 3, 3}};
    config.runs = 60;
    config.seed = 21;
    const auto a = run_campaign(config);
    const auto b = run_campaign(config);
    CHECK(report_to_csv(a) == report_to_csv(b));
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());
    const auto from_csv = parse_report_csv(report_to_csv(a));
    const auto from_json = parse_report_json(nlohmann::json::parse(report_to_json(a).dump()));
    CHECK(from_csv == report_rows(a));
    CHECK(from_json == report_rows(a));
    CHECK_THROWS_AS(parse_report_csv("nope\n"), InvalidInputError);
  }

  TEST_CASE("reference tables and matching") {
    CHECK_THROWS_AS(reference_table(5), InvalidSpecError);
    CHECK_THROWS_AS(reference_table(0), InvalidSpecError);
    CHECK(reference_table(1).rows.size() == 4);
    CHECK(reference_table(2).spec.levels == std::vector<int>{2, 2, 2, 2, 2});
    // Every published row is self-consistent: printed mean/variance follow
    // from the printed count table.
    for (int id = 1; id <= 4; ++id) {
      for (const auto& row : reference_table(id).rows) {
        const Group g = make_group(row.count_table, std::llround(std::stod(row.efficiency) * 100));
        CHECK(group_matches(g, row));
      }
    }
    const ReferenceRow r = reference_table(1).rows[0];
    CHECK_FALSE(group_matches(make_group(r.count_table, 9199), r));
    CHECK_FALSE(group_matches(make_group({10, 38, 45, 7, 0}, 9198), r));
  }

  TEST_CASE("reproduce table 4 k=9 section") {
    const auto outcome = reproduce_table(4, 500, 0);
    CHECK(outcome.all_realized());
    for (const auto& s : outcome.report.sections) {
      if (s.k != 9) continue;
      CHECK(s.groups.size() == 2);
      for (const auto& g : s.groups) {
        CHECK(format_fixed(g.mean, 2) == "1.50");
        CHECK(format_fixed(g.variance, 2) == "0.53");
        CHECK(format_centi(g.efficiency_centi) == "52.80");
      }
    }
    const std::string text = format_comparison(outcome);
    CHECK(text.find("7/7 published rows realized") != std::string::npos);
  }
}
