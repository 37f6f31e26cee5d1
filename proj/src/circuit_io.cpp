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

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "circuitdoe/circuit_engine.hpp"
#include "circuitdoe/error.hpp"
#include "json.hpp"

namespace circuitdoe {

namespace {

void write_circuit_line(std::ostream& out, const Circuit& c) {
  nlohmann::json j;
  j["support"] = c.support;
  j["coef"] = c.coef;
  out << j.dump() << '\n';
}

}  // namespace

void write_basis(std::ostream& out, const CircuitBasis& basis) {
  nlohmann::json header;
  header["K"] = basis.num_points;
  header["p"] = basis.num_parameters;
  header["L"] = basis.size();
  header["fingerprint"] = basis.fingerprint;
  header["max_support"] = basis.max_support_size;
  out << header.dump() << '\n';
  for (const auto& c : basis.circuits) write_circuit_line(out, c);
}

void write_moves(std::ostream& out, const BasicMoveSet& moves) {
  nlohmann::json header;
  header["K"] = moves.num_points;
  header["L"] = moves.size();
  header["fingerprint"] = moves.fingerprint;
  header["max_support"] = 4;
  out << header.dump() << '\n';
  for (const auto& c : moves.moves) write_circuit_line(out, c);
}

CircuitBasis read_basis(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("circuit basis file is empty");
  CircuitBasis basis;
  int64_t expected = 0;
  try {
    const auto header = nlohmann::json::parse(line);
    basis.num_points = header.at("K").get<int>();
    basis.num_parameters = header.value("p", 0);
    basis.fingerprint = header.at("fingerprint").get<std::string>();
    basis.max_support_size = header.value("max_support", 0);
    expected = header.at("L").get<int64_t>();
    basis.circuits.reserve(expected);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      Circuit c;
      c.support = j.at("support").get<std::vector<int>>();
      c.coef = j.at("coef").get<std::vector<int64_t>>();
      if (c.support.size() != c.coef.size()) throw InvalidInputError("circuit line has mismatched lengths");
      basis.circuits.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("malformed circuit basis file: ") + e.what());
  }
  if (basis.size() != expected)
    throw InvalidInputError("circuit basis header announces " + std::to_string(expected) + " circuits, file holds " +
                            std::to_string(basis.size()));
  return basis;
}

CircuitBasis load_or_enumerate(const ModelMatrix& model, const std::filesystem::path& cache_dir,
                               const EnumerationOptions& options) {
  std::string name = model.fingerprint();
  if (options.max_support_size > 0) name += "-s" + std::to_string(options.max_support_size);
  const auto path = cache_dir / (name + ".jsonl");
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    CircuitBasis cached = read_basis(in);
    if (cached.fingerprint == model.fingerprint() && cached.max_support_size == options.max_support_size)
      return cached;
  }
  CircuitBasis basis = enumerate_circuits(model, options);
  std::filesystem::create_directories(cache_dir);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    write_basis(out, basis);
  }
  std::filesystem::rename(tmp, path);
  return basis;
}

}  // namespace circuitdoe
