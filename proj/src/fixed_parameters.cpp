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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>

#include "qaoa/error.hpp"
#include "qaoa/protocol.hpp"
#include "qaoa/seeding.hpp"

namespace qaoa {

namespace {

struct BuiltinEntry {
  ProblemFamily family;
  int p;
  std::vector<double> gamma;
  std::vector<double> beta;
};

const std::vector<BuiltinEntry>& builtin_entries() {
  using F = ProblemFamily;
  static const std::vector<BuiltinEntry> entries = {
      {F::MaxCut3Regular, 1, {0.616}, {0.393}},
      {F::MaxCut3Regular, 2, {0.488, 0.898}, {0.555, 0.293}},
      {F::MaxCut3Regular, 3, {0.422, 0.798, 0.937}, {0.609, 0.459, 0.235}},
      {F::MaxCut3Regular, 4, {0.409, 0.781, 0.988, 1.156}, {0.6, 0.434, 0.297, 0.159}},
      {F::MaxCut3Regular, 5, {0.36, 0.707, 0.823, 1.005, 1.154}, {0.632, 0.523, 0.39, 0.275, 0.149}},
      {F::MaxCut3Regular, 6, {0.331, 0.645, 0.731, 0.837, 1.009, 1.126}, {0.636, 0.534, 0.463, 0.36, 0.259, 0.139}},
      {F::MaxCut3Regular, 7, {0.31, 0.618, 0.69, 0.751, 0.859, 1.02, 1.122}, {0.648, 0.554, 0.49, 0.445, 0.341, 0.244, 0.131}},
      {F::SKModelForPO, 1, {0.5}, {0.3927}},
      {F::SKModelForPO, 2, {0.3817, 0.6655}, {0.496, 0.269}},
      {F::SKModelForPO, 3, {0.3297, 0.5688, 0.6406}, {0.55, 0.3675, 0.2109}},
      {F::SKModelForPO, 4, {0.2949, 0.5144, 0.5586, 0.6429}, {0.571, 0.4176, 0.3028, 0.1729}},
      {F::SKModelForPO, 5, {0.2705, 0.4804, 0.5074, 0.5646, 0.6397}, {0.5899, 0.4492, 0.3559, 0.2643, 0.1486}},
      {F::SKModelForPO, 6, {0.2528, 0.4531, 0.475, 0.5146, 0.565, 0.6392}, {0.6004, 0.467, 0.388, 0.3176, 0.2325, 0.1291}},
      {F::SKModelForPO, 7, {0.2383, 0.4327, 0.4516, 0.483, 0.5147, 0.5686, 0.6393}, {0.6085, 0.481, 0.409, 0.3534, 0.2857, 0.208, 0.1146}},
  };
  return entries;
}

// Maps optimized angles of the family's source problem, as produced by this
// simulator, to the stored table convention. SK optima come out with the
// opposite beta sign.
QaoaParams to_table_convention(ProblemFamily family, QaoaParams params) {
  if (family == ProblemFamily::SKModelForPO) {
    for (double& b : params.beta) b = -b;
  }
  return params;
}

// Depth p -> p+1 linear interpolation of a schedule.
std::vector<double> interpolate_schedule(const std::vector<double>& v) {
  const int p = static_cast<int>(v.size());
  std::vector<double> out(p + 1);
  for (int i = 0; i <= p; ++i) {
    const double left = i > 0 ? v[i - 1] : 0.0;
    const double right = i < p ? v[i] : 0.0;
    out[i] = (static_cast<double>(i) / p) * left + (static_cast<double>(p - i) / p) * right;
  }
  return out;
}

dfo::Point flatten(const QaoaParams& params) {
  dfo::Point x = params.gamma;
  x.insert(x.end(), params.beta.begin(), params.beta.end());
  return x;
}

QaoaParams unflatten(std::span<const double> x) {
  const std::size_t p = x.size() / 2;
  return {{x.begin(), x.begin() + p}, {x.begin() + p, x.end()}};
}

QaoaParams optimize_exact(const QaoaCircuit& circuit, double sign, const QaoaParams& start,
                          int evals_per_layer) {
  const int p = start.depth();
  auto oracle = dfo::FunctionOracle::noiseless(2 * p, [&](std::span<const double> x) {
    return sign * expectation_energy(run_qaoa(circuit, unflatten(x)), circuit.hamiltonian);
  });
  const auto plan = dfo::plan_for_evaluations(evals_per_layer * p, 2 * p + 1,
                                              evals_per_layer * p - (2 * p + 1));
  const dfo::Point x0 = flatten(start);
  const auto trace = dfo::minimize_linear_trust_region(oracle, x0, 0.1, 1e-6, plan, 0);
  return unflatten(trace.best_point);
}

QaoaParams grid_search_p1(const QaoaCircuit& circuit, double sign) {
  constexpr int kSteps = 32;
  const double pi = std::numbers::pi;
  QaoaParams best{{0.0}, {0.0}};
  double best_value = std::numeric_limits<double>::infinity();
  for (int a = 1; a <= kSteps; ++a) {
    for (int b = -kSteps / 2; b <= kSteps / 2; ++b) {
      const QaoaParams trial{{a * (pi / 2) / kSteps}, {b * (pi / 2) / kSteps}};
      const double v =
          sign * expectation_energy(run_qaoa(circuit, trial), circuit.hamiltonian);
      if (v < best_value) {
        best_value = v;
        best = trial;
      }
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(ProblemFamily f) {
  return f == ProblemFamily::MaxCut3Regular ? "MaxCut3Regular" : "SKModelForPO";
}

ProblemFamily family_from_string(std::string_view s) {
  if (s == "MaxCut3Regular") return ProblemFamily::MaxCut3Regular;
  if (s == "SKModelForPO") return ProblemFamily::SKModelForPO;
  throw ArgumentError("unknown problem family '" + std::string(s) + "'");
}

ProblemFamily family_for(const ProblemInstance& inst) {
  return kind_of(inst) == ProblemKind::MaxCut ? ProblemFamily::MaxCut3Regular
                                              : ProblemFamily::SKModelForPO;
}

double default_rhobeg(ProblemFamily f) {
  return f == ProblemFamily::MaxCut3Regular ? 0.1 : 0.5;
}

FixedParameterTable FixedParameterTable::builtin() {
  FixedParameterTable t;
  for (const auto& e : builtin_entries()) t.set(e.family, {e.gamma, e.beta});
  return t;
}

FixedParameterTable FixedParameterTable::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("families") || !j["families"].is_object()) {
    throw SchemaError("fixed-parameter table: missing object 'families'");
  }
  if (j.value("schema_version", 0) != 1) {
    throw SchemaError("fixed-parameter table: unsupported schema_version");
  }
  FixedParameterTable t;
  for (const auto& [fam_name, entries] : j["families"].items()) {
    ProblemFamily family;
    try {
      family = family_from_string(fam_name);
    } catch (const ArgumentError&) {
      throw SchemaError("fixed-parameter table: families." + fam_name + ": unknown family");
    }
    for (const auto& [p_str, entry] : entries.items()) {
      const std::string where = "families." + fam_name + "." + p_str;
      QaoaParams params;
      try {
        params.gamma = entry.at("gamma").get<std::vector<double>>();
        params.beta = entry.at("beta").get<std::vector<double>>();
      } catch (const nlohmann::json::exception&) {
        throw SchemaError("fixed-parameter table: " + where + ": expected gamma and beta arrays");
      }
      int p = 0;
      try {
        p = std::stoi(p_str);
      } catch (const std::exception&) {
        throw SchemaError("fixed-parameter table: " + where + ": key is not an integer");
      }
      if (params.depth() != p || params.beta.size() != params.gamma.size()) {
        throw SchemaError("fixed-parameter table: " + where + ": vector lengths must equal p");
      }
      t.set(family, std::move(params));
    }
  }
  return t;
}

FixedParameterTable FixedParameterTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open fixed-parameter table " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json FixedParameterTable::to_json() const {
  nlohmann::json fams = nlohmann::json::object();
  for (const auto& [key, params] : entries_) {
    fams[std::string(to_string(key.first))][std::to_string(key.second)] = {
        {"gamma", params.gamma}, {"beta", params.beta}};
  }
  return {{"schema_version", 1}, {"families", fams}};
}

void FixedParameterTable::set(ProblemFamily family, QaoaParams params) {
  params.validate();
  const int p = params.depth();
  entries_[{family, p}] = std::move(params);
}

const QaoaParams* FixedParameterTable::find(ProblemFamily family, int p) const {
  auto it = entries_.find({family, p});
  return it == entries_.end() ? nullptr : &it->second;
}

QaoaParams initial_parameters(ProblemFamily family, int p, const FixedParameterTable& table) {
  const QaoaParams* entry = table.find(family, p);
  if (entry == nullptr) {
    throw MissingEntryError("no fixed parameters for family " + std::string(to_string(family)) +
                            " at p=" + std::to_string(p));
  }
  return *entry;
}

QaoaParams transfer_parameters(ProblemFamily family, const QaoaParams& entry, int n) {
  if (family == ProblemFamily::MaxCut3Regular) return entry;
  QaoaParams out = entry;
  const double s = std::sqrt(static_cast<double>(n));
  for (double& g : out.gamma) g /= s;
  for (double& b : out.beta) b = -b;
  return out;
}

dfo::Point ParamScaling::to_optimizer(const QaoaParams& params) const {
  dfo::Point u;
  u.reserve(params.gamma.size() * 2);
  for (double g : params.gamma) u.push_back(g / s_gamma);
  for (double b : params.beta) u.push_back(b / s_beta);
  return u;
}

QaoaParams ParamScaling::to_params(std::span<const double> u) const {
  if (u.size() % 2 != 0 || u.empty()) {
    throw DimensionError("optimizer point must have 2p coordinates");
  }
  const std::size_t p = u.size() / 2;
  QaoaParams out;
  out.gamma.reserve(p);
  out.beta.reserve(p);
  for (std::size_t i = 0; i < p; ++i) out.gamma.push_back(u[i] * s_gamma);
  for (std::size_t i = 0; i < p; ++i) out.beta.push_back(u[p + i] * s_beta);
  return out;
}

ParamScaling build_param_scaling(const QaoaParams& initial) {
  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m > 0.0 ? m : 1.0;
  };
  return {max_abs(initial.gamma), max_abs(initial.beta)};
}

DiagonalHamiltonian sk_hamiltonian(const MaxCutInstance& couplings) {
  // Z_i Z_j = 1 - 2 (x_i xor x_j), so the SK energy follows from the cut value.
  DiagonalHamiltonian h = build_maxcut_hamiltonian(couplings);
  double total = 0.0;
  for (const Edge& e : couplings.edges) total += e.w;
  const double s = 1.0 / std::sqrt(static_cast<double>(couplings.n));
  for (double& e : h.energies) e = s * (total - 2.0 * e);
  h.offset = 0.0;
  return h;
}

FixedParameterTable generate_fixed_parameter_table(ProblemFamily family,
                                                   const FallbackTableOptions& options) {
  if (options.max_p < 1 || options.instances < 1) {
    throw ArgumentError("fallback table needs max_p >= 1 and at least one instance");
  }
  std::vector<QaoaCircuit> circuits;
  // MaxCut maximizes the cut; SK minimizes its energy.
  const double sign = family == ProblemFamily::MaxCut3Regular ? -1.0 : 1.0;
  for (int k = 0; k < options.instances; ++k) {
    const std::uint64_t s = derive_seed(options.seed, {static_cast<std::uint64_t>(k)});
    if (family == ProblemFamily::MaxCut3Regular) {
      const MaxCutInstance g = generate_regular_graph(options.n, 3, s);
      circuits.push_back({build_maxcut_hamiltonian(g), TransverseX{}, std::nullopt});
    } else {
      circuits.push_back(
          {sk_hamiltonian(generate_sk_instance(options.n, s)), TransverseX{}, std::nullopt});
    }
  }

  FixedParameterTable table;
  QaoaParams previous_mean;
  for (int p = 1; p <= options.max_p; ++p) {
    QaoaParams sum{std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)};
    for (const QaoaCircuit& c : circuits) {
      QaoaParams start = p == 1 ? grid_search_p1(c, sign)
                                : QaoaParams{interpolate_schedule(previous_mean.gamma),
                                             interpolate_schedule(previous_mean.beta)};
      const QaoaParams opt = optimize_exact(c, sign, start, options.evals_per_layer);
      for (int i = 0; i < p; ++i) {
        sum.gamma[i] += opt.gamma[i];
        sum.beta[i] += opt.beta[i];
      }
    }
    for (int i = 0; i < p; ++i) {
      sum.gamma[i] /= options.instances;
      sum.beta[i] /= options.instances;
    }
    previous_mean = sum;
    table.set(family, to_table_convention(family, sum));
  }
  return table;
}

}  // namespace qaoa
