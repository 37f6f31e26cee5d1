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

#include "circuitdoe/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "circuitdoe/error.hpp"
#include "circuitdoe/optimal_search.hpp"

namespace circuitdoe {

std::vector<int> default_fraction_sizes(const FactorSpec& spec) {
  const int p = spec.num_parameters();
  std::vector<int> ks;
  for (int k = p + 1; k <= p + 3 && k <= spec.num_points(); ++k) ks.push_back(k);
  return ks;
}

int64_t efficiency_centi(double efficiency) { return std::llround(efficiency * 100.0); }

std::string format_centi(int64_t centi) { return format_fixed(Rational(centi, 100), 2); }

KSection group_fractions(std::span<const FractionRecord> records) {
  KSection section;
  if (records.empty()) return section;
  section.k = records.front().fraction.size();
  const std::string& fingerprint = records.front().fraction.fingerprint();
  std::map<std::pair<int64_t, CountTable>, Group> groups;
  for (const auto& rec : records) {
    if (rec.fraction.size() != section.k)
      throw InvalidInputError("group_fractions: mixed fraction sizes " + std::to_string(section.k) + " and " +
                              std::to_string(rec.fraction.size()));
    if (rec.fraction.fingerprint() != fingerprint) throw InvalidInputError("group_fractions: mixed models");
    const int64_t centi = efficiency_centi(rec.efficiency);
    Group& g = groups[{centi, rec.profile.count_table}];
    if (g.frequency == 0) {
      g.count_table = rec.profile.count_table;
      g.mean = rec.profile.mean;
      g.variance = rec.profile.variance;
      g.efficiency_centi = centi;
    }
    ++g.frequency;
    g.members.push_back(rec.fraction);
  }
  for (auto& [key, g] : groups) {
    std::sort(g.members.begin(), g.members.end());
    g.members.erase(std::unique(g.members.begin(), g.members.end()), g.members.end());
    section.groups.push_back(std::move(g));
  }
  return section;
}

GroupedReport run_campaign(const CampaignConfig& config, const BasicMoveSet& moves) {
  const ModelMatrix model = model_matrix(config.spec, config.coding);
  if (moves.fingerprint != model.fingerprint()) throw InvalidInputError("basic moves belong to a different model");
  if (config.runs < 1) throw InvalidInputError("runs must be >= 1");
  const std::vector<int> ks = config.ks.empty() ? default_fraction_sizes(config.spec) : config.ks;

  GroupedReport report;
  report.levels = config.spec.to_string();
  report.coding = std::string(coding_name(config.coding));
  report.runs = config.runs;
  report.seed = config.seed;
  report.num_moves = moves.size();

  for (int k : ks) {
    if (k < model.num_parameters() || k > model.num_points())
      throw InvalidInputError("fraction size k = " + std::to_string(k) + " outside [p, K]");
    const uint64_t k_seed = derive_seed(config.seed, static_cast<uint64_t>(k));
    std::vector<FractionRecord> records(config.runs);
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int r = next.fetch_add(1); r < config.runs; r = next.fetch_add(1)) {
        SearchOptions opts;
        opts.record_trace = false;
        const SearchResult res = exchange_search(model, k, 1, derive_seed(k_seed, static_cast<uint64_t>(r)), opts);
        records[r].fraction = res.best_fraction;
        records[r].profile = intersection_counts(res.best_fraction, moves);
        records[r].efficiency = res.best.efficiency;
      }
    };
    int threads = config.threads;
    if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, config.runs);
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    report.sections.push_back(group_fractions(records));
  }
  return report;
}

GroupedReport run_campaign(const CampaignConfig& config) {
  return run_campaign(config, enumerate_basic_moves(model_matrix(config.spec, config.coding), config.threads));
}

bool variance_efficiency_holds(const KSection& section) {
  for (const auto& lo : section.groups)
    for (const auto& hi : section.groups)
      if (hi.efficiency_centi > lo.efficiency_centi && hi.variance > lo.variance) return false;
  return true;
}

std::vector<std::pair<int, bool>> variance_efficiency_check(const GroupedReport& report) {
  std::vector<std::pair<int, bool>> out;
  for (const auto& s : report.sections) out.emplace_back(s.k, variance_efficiency_holds(s));
  return out;
}

std::vector<ReportRow> report_rows(const GroupedReport& report) {
  std::vector<ReportRow> rows;
  for (const auto& s : report.sections)
    for (const auto& g : s.groups)
      rows.push_back({s.k, g.count_table, g.mean, g.variance, g.efficiency_centi, g.frequency});
  return rows;
}

std::string report_to_csv(const GroupedReport& report) {
  std::ostringstream out;
  out << "k,c0,c1,c2,c3,c4,mean,variance,efficiency,n\n";
  for (const auto& r : report_rows(report)) {
    out << r.k;
    for (int64_t c : r.count_table) out << ',' << c;
    out << ',' << format_fixed(r.mean, 2) << ',' << format_fixed(r.variance, 2) << ','
        << format_centi(r.efficiency_centi) << ',' << r.frequency << '\n';
  }
  return out.str();
}

namespace {

std::string rational_text(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

nlohmann::json report_to_json(const GroupedReport& report) {
  nlohmann::json j;
  j["levels"] = report.levels;
  j["coding"] = report.coding;
  j["runs"] = report.runs;
  j["seed"] = report.seed;
  j["basic_moves"] = report.num_moves;
  nlohmann::json sections = nlohmann::json::array();
  for (const auto& s : report.sections) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : s.groups) {
      nlohmann::json members = nlohmann::json::array();
      for (const auto& f : g.members) members.push_back(f.points());
      groups.push_back({{"table", g.count_table},
                        {"mean", format_fixed(g.mean, 2)},
                        {"mean_exact", rational_text(g.mean)},
                        {"variance", format_fixed(g.variance, 2)},
                        {"variance_exact", rational_text(g.variance)},
                        {"efficiency", format_centi(g.efficiency_centi)},
                        {"n", g.frequency},
                        {"members", std::move(members)}});
    }
    sections.push_back({{"k", s.k}, {"groups", std::move(groups)}});
  }
  j["sections"] = std::move(sections);
  return j;
}

namespace {

int64_t parse_centi(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos || text.size() - dot != 3) throw InvalidInputError("expected 2-decimal value: " + text);
  const bool negative = !text.empty() && text[0] == '-';
  const int64_t whole = std::stoll(text.substr(negative ? 1 : 0, dot - (negative ? 1 : 0)));
  const int64_t frac = std::stoll(text.substr(dot + 1));
  const int64_t v = whole * 100 + frac;
  return negative ? -v : v;
}

ReportRow row_from_table(int k, const CountTable& table, int64_t centi, int64_t n) {
  ReportRow row;
  row.k = k;
  row.count_table = table;
  std::tie(row.mean, row.variance) = moments_from_counts(table);
  row.efficiency_centi = centi;
  row.frequency = n;
  return row;
}

}  // namespace

std::vector<ReportRow> parse_report_csv(std::string_view csv) {
  std::vector<ReportRow> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "k,c0,c1,c2,c3,c4,mean,variance,efficiency,n")
    throw InvalidInputError("report CSV: unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) throw InvalidInputError("report CSV: expected 10 columns in '" + line + "'");
    CountTable table{};
    for (int v = 0; v < 5; ++v) table[v] = std::stoll(cells[1 + v]);
    ReportRow row = row_from_table(std::stoi(cells[0]), table, parse_centi(cells[8]), std::stoll(cells[9]));
    if (format_fixed(row.mean, 2) != cells[6] || format_fixed(row.variance, 2) != cells[7])
      throw InvalidInputError("report CSV: mean/variance inconsistent with count table in '" + line + "'");
    rows.push_back(row);
  }
  return rows;
}

std::vector<ReportRow> parse_report_json(const nlohmann::json& j) {
  std::vector<ReportRow> rows;
  try {
    for (const auto& s : j.at("sections")) {
      const int k = s.at("k").get<int>();
      for (const auto& g : s.at("groups")) {
        const CountTable table = g.at("table").get<CountTable>();
        ReportRow row =
            row_from_table(k, table, parse_centi(g.at("efficiency").get<std::string>()), g.at("n").get<int64_t>());
        if (rational_text(row.mean) != g.at("mean_exact").get<std::string>() ||
            rational_text(row.variance) != g.at("variance_exact").get<std::string>())
          throw InvalidInputError("report JSON: mean/variance inconsistent with count table");
        rows.push_back(row);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("report JSON: ") + e.what());
  }
  return rows;
}

}  // namespace circuitdoe
