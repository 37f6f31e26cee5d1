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

// circuitdoe: circuit bases, D-optimal fractions and basic-move profiles
// for main-effect models on full factorial designs.
//
// Exit status: 0 success / full match, 1 partial match, 2 usage or input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "circuitdoe/campaign.hpp"
#include "circuitdoe/circuit_engine.hpp"
#include "circuitdoe/error.hpp"
#include "circuitdoe/fraction_stats.hpp"
#include "circuitdoe/optimal_search.hpp"
#include "circuitdoe/reproduce.hpp"
#include "json.hpp"

namespace {

using namespace circuitdoe;

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string levels;
  std::string coding = "effects";
  uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_levels = true) {
  if (with_levels) cmd->add_option("--levels", o.levels, "Factor levels, e.g. 2,3,4")->required();
  cmd->add_option("--coding", o.coding, "Factor coding")->check(CLI::IsMember({"effects", "orthonormal"}));
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.out, "Output file (default stdout)");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << text;
}

// One point per line: an integer index, or a comma-separated level tuple.
// Blank lines and lines starting with '#' are skipped.
Fraction read_fraction(const std::string& path, const ModelMatrix& model) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot read fraction file " + path);
  std::vector<int> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      if (line.find(',') != std::string::npos) {
        std::vector<int> tuple;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
          size_t used = 0;
          tuple.push_back(std::stoi(cell, &used));
          if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
        }
        points.push_back(model.design.index_of(tuple));
      } else {
        size_t used = 0;
        points.push_back(std::stoi(line, &used));
        if (line.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(line);
      }
    } catch (const std::logic_error&) {
      throw InvalidInputError(path + ":" + std::to_string(line_no) + ": cannot parse point '" + line + "'");
    }
  }
  return Fraction::of(model, std::move(points));
}

nlohmann::json circuit_json(const Circuit& c) { return {{"support", c.support}, {"coef", c.coef}}; }

int run_circuits(const CommonOptions& o, bool basic_only, const std::string& cache_dir) {
  const ModelMatrix model = model_matrix(FactorSpec::parse(o.levels), parse_coding(o.coding));
  EnumerationOptions opts;
  opts.threads = o.threads;
  const CircuitBasis basis = cache_dir.empty() ? enumerate_circuits(model, opts) : load_or_enumerate(model, cache_dir, opts);
  std::ostringstream text;
  if (basic_only)
    write_moves(text, basic_moves(basis));
  else
    write_basis(text, basis);
  emit(o.out, text.str());
  if (!o.out.empty()) {
    std::cout << "K=" << basis.num_points << " p=" << basis.num_parameters << " L=" << basis.size()
              << " basic_moves=" << basic_moves(basis).size() << " sizes:";
    for (const auto& [size, count] : basis.support_size_histogram()) std::cout << ' ' << size << ':' << count;
    std::cout << '\n';
  }
  return kExitOk;
}

int run_moves(const CommonOptions& o) {
  const ModelMatrix model = model_matrix(FactorSpec::parse(o.levels), parse_coding(o.coding));
  std::ostringstream text;
  write_moves(text, enumerate_basic_moves(model, o.threads));
  emit(o.out, text.str());
  return kExitOk;
}

nlohmann::json verdict_json(const SaturationVerdict& v) {
  nlohmann::json j{{"saturated", v.is_saturated}, {"rank_check", v.rank_check}};
  j["witness"] = v.witness ? circuit_json(*v.witness) : nlohmann::json(nullptr);
  return j;
}

int run_eval(const CommonOptions& o, const std::string& fraction_path) {
  const ModelMatrix model = model_matrix(FactorSpec::parse(o.levels), parse_coding(o.coding));
  const Fraction fraction = read_fraction(fraction_path, model);
  const BasicMoveSet moves = enumerate_basic_moves(model, o.threads);
  const MoveProfile profile = intersection_counts(fraction, moves);
  const DCriterionValue crit = d_efficiency(fraction, model);
  std::optional<SaturationVerdict> verdict;
  if (fraction.size() == model.num_parameters()) {
    EnumerationOptions opts;
    opts.threads = o.threads;
    verdict = is_saturated(fraction, enumerate_circuits(model, opts), model);
  }
  std::string text;
  if (o.format == "csv") {
    text = profile_csv_header() + (verdict ? ",saturated" : "") + "\n" + profile_csv_row(fraction, profile, crit.efficiency);
    if (verdict) text += verdict->is_saturated ? ",true" : ",false";
    text += "\n";
  } else {
    nlohmann::json j{{"k", fraction.size()},
                     {"table", profile.count_table},
                     {"mean", format_fixed(profile.mean, 2)},
                     {"variance", format_fixed(profile.variance, 2)},
                     {"efficiency", format_fixed(crit.efficiency, 2)},
                     {"det", crit.det_info},
                     {"fraction", fraction.points()}};
    if (verdict) j["saturation"] = verdict_json(*verdict);
    text = j.dump(2) + "\n";
  }
  emit(o.out, text);
  return kExitOk;
}

int run_saturated(const CommonOptions& o, const std::string& fraction_path) {
  const ModelMatrix model = model_matrix(FactorSpec::parse(o.levels), parse_coding(o.coding));
  const Fraction fraction = read_fraction(fraction_path, model);
  EnumerationOptions opts;
  opts.threads = o.threads;
  const SaturationVerdict v = is_saturated(fraction, enumerate_circuits(model, opts), model);
  emit(o.out, verdict_json(v).dump(2) + "\n");
  return kExitOk;
}

int run_search(const CommonOptions& o, int k, int restarts, bool exhaustive, double budget) {
  const ModelMatrix model = model_matrix(FactorSpec::parse(o.levels), parse_coding(o.coding));
  SearchResult res;
  if (exhaustive) {
    res = exhaustive_best(model, k, budget);
  } else {
    SearchOptions opts;
    opts.threads = o.threads;
    opts.record_trace = false;
    res = exchange_search(model, k, restarts, o.seed, opts);
  }
  std::string text;
  if (o.format == "csv") {
    text = "restart,seed,efficiency,iterations,fraction\n";
    for (const auto& r : res.restarts) {
      text += std::to_string(r.index) + "," + std::to_string(r.seed) + "," + format_fixed(r.efficiency, 6) + "," +
              std::to_string(r.iterations) + ",";
      for (size_t i = 0; i < r.fraction.size(); ++i) text += (i ? ";" : "") + std::to_string(r.fraction[i]);
      text += "\n";
    }
    if (exhaustive) {
      text = "efficiency,fraction\n";
      for (const auto& f : res.optimal_fractions) {
        text += format_fixed(res.best.efficiency, 6) + ",";
        for (size_t i = 0; i < f.points().size(); ++i) text += (i ? ";" : "") + std::to_string(f.points()[i]);
        text += "\n";
      }
    }
  } else {
    nlohmann::json j{{"best_efficiency", res.best.efficiency},
                     {"det", res.best.det_info},
                     {"fraction", res.best_fraction.points()},
                     {"k", k},
                     {"levels", o.levels}};
    if (exhaustive) {
      nlohmann::json all = nlohmann::json::array();
      for (const auto& f : res.optimal_fractions) all.push_back(f.points());
      j["optimal_fractions"] = std::move(all);
      j["subsets_scanned"] = res.subsets_scanned;
    } else {
      nlohmann::json rs = nlohmann::json::array();
      for (const auto& r : res.restarts)
        rs.push_back({{"seed", r.seed}, {"eff", r.efficiency}, {"iterations", r.iterations}, {"fraction", r.fraction}});
      j["restarts"] = std::move(rs);
    }
    text = j.dump(2) + "\n";
  }
  emit(o.out, text);
  return kExitOk;
}

std::string encode_report(const GroupedReport& report, const std::string& format) {
  return format == "json" ? report_to_json(report).dump(2) + "\n" : report_to_csv(report);
}

int run_campaign_cmd(const CommonOptions& o, const std::vector<int>& ks, int runs) {
  CampaignConfig config;
  config.spec = FactorSpec::parse(o.levels);
  config.coding = parse_coding(o.coding);
  config.ks = ks;
  config.runs = runs;
  config.seed = o.seed;
  config.threads = o.threads;
  emit(o.out, encode_report(run_campaign(config), o.format));
  return kExitOk;
}

int run_reproduce(const CommonOptions& o, int table, int runs) {
  reference_table(table);  // unknown ids fail before any work
  const ReproductionOutcome outcome = reproduce_table(table, runs, o.seed, o.threads);
  if (!o.out.empty()) emit(o.out, encode_report(outcome.report, o.format));
  std::cout << format_comparison(outcome);
  return outcome.all_realized() ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circuit bases and D-optimal fractions of main-effect factorial models"};
  app.require_subcommand(1);

  CommonOptions circuits_opts, moves_opts, eval_opts, sat_opts, search_opts, campaign_opts, reproduce_opts;

  bool basic_only = false;
  std::string cache_dir;
  auto* circuits = app.add_subcommand("circuits", "Enumerate the circuit basis as JSON Lines");
  add_common(circuits, circuits_opts);
  circuits->add_flag("--basic-only", basic_only, "Write only the support-4 circuits");
  circuits->add_option("--cache-dir", cache_dir, "Reuse/store bases keyed by model fingerprint");

  auto* moves = app.add_subcommand("moves", "Enumerate only the basic moves (support size 4)");
  add_common(moves, moves_opts);

  std::string eval_fraction;
  auto* eval = app.add_subcommand("eval", "Profile a fraction: count table, mean, variance, D-efficiency");
  add_common(eval, eval_opts);
  eval->add_option("--fraction", eval_fraction, "Fraction file")->required();
  eval->add_option("--format", eval_opts.format)->check(CLI::IsMember({"csv", "json"}));

  std::string sat_fraction;
  auto* saturated = app.add_subcommand("saturated", "Circuit and rank saturation tests for a p-point fraction");
  add_common(saturated, sat_opts);
  saturated->add_option("--fraction", sat_fraction, "Fraction file")->required();

  int search_k = 0, restarts = 500;
  bool exhaustive = false;
  double budget = kDefaultExhaustiveBudget;
  auto* search = app.add_subcommand("search", "D-optimal k-point fraction by exchange or exhaustive scan");
  add_common(search, search_opts);
  search->add_option("--k", search_k, "Fraction size")->required();
  search->add_option("--restarts", restarts, "Random starts")->check(CLI::PositiveNumber);
  search->add_flag("--exhaustive", exhaustive, "Scan all k-subsets");
  search->add_option("--budget", budget, "Maximum subsets for --exhaustive");
  search->add_option("--format", search_opts.format)->check(CLI::IsMember({"csv", "json"}));

  std::vector<int> ks;
  int runs = 500;
  bool campaign_json = false;
  campaign_opts.format = "csv";
  auto* campaign = app.add_subcommand("campaign", "Independent searches per k, grouped by move profile");
  add_common(campaign, campaign_opts);
  campaign->add_option("--k", ks, "Fraction sizes (default p+1..p+3)")->delimiter(',');
  campaign->add_option("--runs", runs, "Searches per k")->check(CLI::PositiveNumber);
  campaign->add_option("--format", campaign_opts.format)->check(CLI::IsMember({"csv", "json"}));
  campaign->add_flag("--json", campaign_json, "Same as --format json");

  int table = 0;
  int reproduce_runs = 500;
  reproduce_opts.format = "csv";
  auto* reproduce = app.add_subcommand("reproduce", "Run a reference scenario and compare against its table");
  add_common(reproduce, reproduce_opts, false);
  reproduce->add_option("--table", table, "Table id 1..4")->required();
  reproduce->add_option("--runs", reproduce_runs, "Searches per k")->check(CLI::PositiveNumber);
  reproduce->add_option("--format", reproduce_opts.format)->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*circuits) return run_circuits(circuits_opts, basic_only, cache_dir);
    if (*moves) return run_moves(moves_opts);
    if (*eval) return run_eval(eval_opts, eval_fraction);
    if (*saturated) return run_saturated(sat_opts, sat_fraction);
    if (*search) return run_search(search_opts, search_k, restarts, exhaustive, budget);
    if (*campaign) {
      if (campaign_json) campaign_opts.format = "json";
      return run_campaign_cmd(campaign_opts, ks, runs);
    }
    if (*reproduce) return run_reproduce(reproduce_opts, table, reproduce_runs);
  } catch (const circuitdoe::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
