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

#include <string>

#include "qaoa/error.hpp"
#include "qaoa/protocol.hpp"

namespace qaoa {

using nlohmann::json;

using dfo::Termination;

namespace {

json params_json(const QaoaParams& p) { return {{"gamma", p.gamma}, {"beta", p.beta}}; }

QaoaParams params_from(const json& j) {
  return {j.at("gamma").get<std::vector<double>>(), j.at("beta").get<std::vector<double>>()};
}

Termination termination_from(const std::string& s) {
  for (auto t : {Termination::EvaluationBudget, Termination::TrustRegionConverged,
                 Termination::ZeroModelGradient, Termination::SimplexCollapsed,
                 Termination::IterationLimit}) {
    if (dfo::to_string(t) == s) return t;
  }
  throw SchemaError("trace.termination: unknown value '" + s + "'");
}

}  // namespace

json config_to_json(const ProtocolConfig& c) {
  return {
      {"total_shots", c.total_shots},
      {"extra_evals", c.extra_evals},
      {"rhobeg", c.rhobeg ? json(*c.rhobeg) : json(nullptr)},
      {"rhoend", c.rhoend ? json(*c.rhoend) : json(nullptr)},
      {"optimizer", to_string(c.optimizer)},
      {"backend", to_string(c.backend)},
      {"seed", c.seed},
      {"trotter_reps", c.trotter_reps},
      {"landscape_resolution", c.landscape_resolution},
      {"landscape_width", c.landscape_width},
      {"spsa", {{"a", c.spsa.a}, {"c", c.spsa.c}, {"alpha", c.spsa.alpha}, {"gamma", c.spsa.gamma}}},
      {"spsa_iterations", c.spsa_iterations},
  };
}

ProtocolConfig config_from_json(const json& j) {
  ProtocolConfig c;
  try {
    c.total_shots = j.at("total_shots").get<long>();
    c.extra_evals = j.at("extra_evals").get<int>();
    if (!j.at("rhobeg").is_null()) c.rhobeg = j["rhobeg"].get<double>();
    if (!j.at("rhoend").is_null()) c.rhoend = j["rhoend"].get<double>();
    c.optimizer = optimizer_from_string(j.at("optimizer").get<std::string>());
    c.backend = backend_from_string(j.at("backend").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.trotter_reps = j.at("trotter_reps").get<int>();
    c.landscape_resolution = j.at("landscape_resolution").get<int>();
    c.landscape_width = j.at("landscape_width").get<double>();
    const json& s = j.at("spsa");
    c.spsa = {s.at("a").get<double>(), s.at("c").get<double>(), s.at("alpha").get<double>(),
              s.at("gamma").get<double>()};
    c.spsa_iterations = j.at("spsa_iterations").get<int>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }
  return c;
}

json result_to_json(const ProtocolResult& r) {
  json records = json::array();
  for (const auto& rec : r.trace.records) {
    records.push_back({{"point", rec.point},
                       {"value", rec.value},
                       {"shots", rec.shots},
                       {"cumulative_shots", rec.cumulative_shots}});
  }
  return {
      {"version", kLibraryVersion},
      {"p", r.p},
      {"family", to_string(r.family)},
      {"config", config_to_json(r.config)},
      {"plan",
       {{"total_shots", r.plan.total_shots},
        {"initial_evals", r.plan.initial_evals},
        {"extra_evals", r.plan.extra_evals},
        {"shots_per_eval", r.plan.shots_per_eval}}},
      {"scaling", {{"s_gamma", r.scaling.s_gamma}, {"s_beta", r.scaling.s_beta}}},
      {"initial_params", params_json(r.initial_params)},
      {"final_params", params_json(r.final_params)},
      {"reference_params", params_json(r.reference_params)},
      {"trace",
       {{"termination", dfo::to_string(r.trace.termination)},
        {"best_point", r.trace.best_point},
        {"best_value", r.trace.best_value},
        {"final_iterate", r.trace.final_iterate},
        {"shots_used", r.trace.shots_used()},
        {"records", records}}},
      {"ar_ini", r.ar_ini},
      {"ar_final", r.ar_final},
      {"ar_opt", r.ar_opt},
      {"relative_improvement",
       r.relative_improvement ? json(*r.relative_improvement) : json(nullptr)},
      {"degenerate", r.degenerate()},
      {"divisor", r.divisor},
      {"clamp_events", r.clamp_events},
  };
}

ProtocolResult result_from_json(const json& j) {
  ProtocolResult r;
  try {
    r.p = j.at("p").get<int>();
    r.family = family_from_string(j.at("family").get<std::string>());
    r.config = config_from_json(j.at("config"));
    const json& plan = j.at("plan");
    r.plan = {plan.at("total_shots").get<long>(), plan.at("initial_evals").get<int>(),
              plan.at("extra_evals").get<int>(), plan.at("shots_per_eval").get<long>()};
    r.scaling = {j.at("scaling").at("s_gamma").get<double>(),
                 j.at("scaling").at("s_beta").get<double>()};
    r.initial_params = params_from(j.at("initial_params"));
    r.final_params = params_from(j.at("final_params"));
    r.reference_params = params_from(j.at("reference_params"));
    const json& t = j.at("trace");
    r.trace.termination = termination_from(t.at("termination").get<std::string>());
    r.trace.best_point = t.at("best_point").get<dfo::Point>();
    r.trace.best_value = t.at("best_value").get<double>();
    r.trace.final_iterate = t.at("final_iterate").get<dfo::Point>();
    for (const json& rec : t.at("records")) {
      r.trace.records.push_back({rec.at("point").get<dfo::Point>(), rec.at("value").get<double>(),
                                 rec.at("shots").get<long>(),
                                 rec.at("cumulative_shots").get<long>()});
    }
    r.ar_ini = j.at("ar_ini").get<double>();
    r.ar_final = j.at("ar_final").get<double>();
    r.ar_opt = j.at("ar_opt").get<double>();
    if (!j.at("relative_improvement").is_null()) {
      r.relative_improvement = j["relative_improvement"].get<double>();
    }
    r.divisor = j.at("divisor").get<double>();
    r.clamp_events = j.at("clamp_events").get<long>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("protocol result: ") + e.what());
  } catch (const ArgumentError& e) {
    throw SchemaError(std::string("protocol result: ") + e.what());
  }
  return r;
}

}  // namespace qaoa
