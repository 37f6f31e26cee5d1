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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "circuitdoe/campaign.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CIRCUITDOE_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path tmp_dir() {
  const fs::path dir = fs::path(CIRCUITDOE_TEST_TMP) / "cli";
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = tmp_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("circuits writes a JSON Lines basis") {
    const auto out = tmp_dir() / "b24.jsonl";
    const auto r = run_cli("circuits --levels 2,2,2,2 --out " + out.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("L=1348") != std::string::npos);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    const auto h = nlohmann::json::parse(header);
    CHECK(h["L"] == 1348);
    const auto moves = run_cli("circuits --levels 2,2,2,2 --basic-only");
    CHECK(moves.status == 0);
    CHECK(std::count(moves.out.begin(), moves.out.end(), '\n') == 101);
    const auto direct = run_cli("moves --levels 2,2,2,2");
    CHECK(direct.out == moves.out);
  }

  TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("search --levels 2,2,2,2 --k 6 --bogus").status == 2);
    CHECK(run_cli("search --levels 2,1 --k 3").status == 2);
    CHECK(run_cli("search --levels 2,2,2,2 --k 3").status == 2);
    CHECK(run_cli("reproduce --table 5").status == 2);
    CHECK(run_cli("campaign --levels 2,2,2,2 --coding dummy").status == 2);
    CHECK(run_cli("").status == 2);
  }

  TEST_CASE("eval") {
    std::string all;
    for (int i = 0; i < 16; ++i) all += std::to_string(i) + "\n";
    const auto full = run_cli("eval --levels 2,2,2,2 --fraction " + write_file("full.txt", all));
    REQUIRE(full.status == 0);
    const auto j = nlohmann::json::parse(full.out);
    CHECK(j["mean"] == "4.00");
    CHECK(j["variance"] == "0.00");
    CHECK(j["efficiency"] == "100.00");

    std::string latin = "# Latin square, level tuples\n";
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) latin += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string((a + b) % 3) + "\n";
    const auto ls = run_cli("eval --levels 3,3,3 --format csv --fraction " + write_file("latin.txt", latin));
    REQUIRE(ls.status == 0);
    CHECK(ls.out.find("9,27,108,108,0,0,1.33,0.44,62.45,") != std::string::npos);

    CHECK(run_cli("eval --levels 2,2,2,2 --fraction " + write_file("dup.txt", "1\n2\n2\n")).status == 2);
    CHECK(run_cli("eval --levels 2,2,2,2 --fraction " + write_file("range.txt", "1\n16\n")).status == 2);
    CHECK(run_cli("eval --levels 2,2,2,2 --fraction " + write_file("bad.txt", "1\nx\n")).status == 2);

    const auto sat = run_cli("eval --levels 2,2,2,2 --fraction " + write_file("five.txt", "0\n3\n5\n6\n9\n"));
    REQUIRE(sat.status == 0);
    CHECK(nlohmann::json::parse(sat.out).contains("saturation"));
  }

  TEST_CASE("saturated") {
    const auto r = run_cli("saturated --levels 2,2,2,2 --fraction " + write_file("sat.txt", "0\n1\n2\n3\n4\n"));
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["saturated"] == j["rank_check"]);
    CHECK(run_cli("saturated --levels 2,2,2,2 --fraction " + write_file("four.txt", "0\n1\n2\n3\n")).status == 2);
  }

  TEST_CASE("search output and determinism") {
    const auto a = tmp_dir() / "s1.json";
    const auto b = tmp_dir() / "s2.json";
    REQUIRE(run_cli("search --levels 3,3,3 --k 9 --restarts 50 --seed 42 --out " + a.string()).status == 0);
    REQUIRE(run_cli("search --levels 3,3,3 --k 9 --restarts 50 --seed 42 --out " + b.string()).status == 0);
    CHECK(read_file(a) == read_file(b));
    const auto j = nlohmann::json::parse(read_file(a));
    CHECK(j["restarts"].size() == 50);
    CHECK(j["fraction"].size() == 9);
    CHECK(j.contains("best_efficiency"));
    // No --seed means seed 0, still reproducible.
    CHECK(run_cli("search --levels 2,2,2,2 --k 7 --restarts 5").out ==
          run_cli("search --levels 2,2,2,2 --k 7 --restarts 5 --seed 0").out);
    const auto ex = run_cli("search --levels 2,2,2,2 --k 6 --exhaustive");
    REQUIRE(ex.status == 0);
    CHECK(nlohmann::json::parse(ex.out)["optimal_fractions"].size() > 0);
    CHECK(run_cli("search --levels 2,2,2,2,2 --k 16 --exhaustive").status == 2);
  }

  TEST_CASE("campaign csv/json agree and are byte-reproducible") {
    const auto csv1 = tmp_dir() / "c1.csv";
    const auto csv2 = tmp_dir() / "c2.csv";
    const auto js = tmp_dir() / "c.json";
    const std::string base = "campaign --levels 2,2,2,2,2 --runs 40 --seed 7 ";
    REQUIRE(run_cli(base + "--out " + csv1.string()).status == 0);
    REQUIRE(run_cli(base + "--out " + csv2.string()).status == 0);
    REQUIRE(run_cli(base + "--json --out " + js.string()).status == 0);
    CHECK(read_file(csv1) == read_file(csv2));
    CHECK(read_file(csv1).rfind("k,c0,c1,c2,c3,c4,mean,variance,efficiency,n\n", 0) == 0);
    const auto rows_csv = circuitdoe::parse_report_csv(read_file(csv1));
    const auto rows_json = circuitdoe::parse_report_json(nlohmann::json::parse(read_file(js)));
    CHECK(rows_csv == rows_json);
    CHECK(!rows_csv.empty());
  }

  TEST_CASE("reproduce table 1") {
    const auto report = tmp_dir() / "t1.csv";
    const auto r = run_cli("reproduce --table 1 --out " + report.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("4/4 published rows realized") != std::string::npos);
    CHECK(fs::file_size(report) > 0);
    // Too few runs to meet every row of table 2: partial match.
    CHECK(run_cli("reproduce --table 2 --runs 1").status == 1);
  }
}
