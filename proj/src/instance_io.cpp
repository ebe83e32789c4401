// Copyright 2026 The qaoa-protocol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qaoa/instance_io.hpp"

#include <fstream>

#include "qaoa/error.hpp"

namespace qaoa {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw SchemaError(std::string("instance: missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("instance: field '") + name + "': " + e.what());
  }
}

}  // namespace

json instance_to_json(const ProblemInstance& inst) {
  if (const auto* mc = std::get_if<MaxCutInstance>(&inst)) {
    json edges = json::array();
    for (const Edge& e : mc->edges) edges.push_back({e.u, e.v, e.w});
    return {{"type", "maxcut"}, {"n", mc->n}, {"edges", std::move(edges)}};
  }
  const auto& po = std::get<PortfolioInstance>(inst);
  json sigma = json::array();
  for (int i = 0; i < po.n; ++i) {
    sigma.push_back(std::vector<double>(po.sigma.begin() + static_cast<long>(i) * po.n,
                                        po.sigma.begin() + static_cast<long>(i + 1) * po.n));
  }
  return {{"type", "po"}, {"n", po.n},         {"mu", po.mu},
          {"sigma", std::move(sigma)}, {"q", po.q}, {"K", po.budget}};
}

ProblemInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("instance: top level must be an object");
  const auto type = field<std::string>(j, "type");
  if (type == "maxcut") {
    MaxCutInstance mc;
    mc.n = field<int>(j, "n");
    const auto edges = field<json>(j, "edges");
    if (!edges.is_array()) throw SchemaError("instance: field 'edges' must be an array");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto& e = edges[k];
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
          !e[1].is_number_integer() || !e[2].is_number()) {
        throw SchemaError("instance: edges[" + std::to_string(k) + "] must be [u, v, w]");
      }
      mc.edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    try {
      mc.validate();
    } catch (const ArgumentError& e) {
      throw SchemaError(std::string("instance: ") + e.what());
    }
    return mc;
  }
  if (type == "po") {
    PortfolioInstance po;
    po.n = field<int>(j, "n");
    po.mu = field<std::vector<double>>(j, "mu");
    const auto rows = field<std::vector<std::vector<double>>>(j, "sigma");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != static_cast<std::size_t>(po.n)) {
        throw SchemaError("instance: sigma[" + std::to_string(r) + "] must have length n");
      }
      po.sigma.insert(po.sigma.end(), rows[r].begin(), rows[r].end());
    }
    po.q = field<double>(j, "q");
    po.budget = field<int>(j, "K");
    try {
      po.validate();
    } catch (const ArgumentError& e) {
      throw SchemaError(std::string("instance: ") + e.what());
    }
    return po;
  }
  throw SchemaError("instance: unknown type '" + type + "'");
}

void write_instance(const ProblemInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << instance_to_json(inst).dump() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

ProblemInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

}  // namespace qaoa
