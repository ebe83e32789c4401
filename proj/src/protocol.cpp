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

#include <cmath>
#include <random>
#include <string>

#include "qaoa/error.hpp"
#include "qaoa/parallel.hpp"
#include "qaoa/protocol.hpp"
#include "qaoa/seeding.hpp"

namespace qaoa {

namespace {

std::vector<double> flatten(const QaoaParams& params) {
  std::vector<double> x = params.gamma;
  x.insert(x.end(), params.beta.begin(), params.beta.end());
  return x;
}

MixerKind mixer_for(const ProblemInstance& inst, int trotter_reps) {
  if (kind_of(inst) == ProblemKind::MaxCut) return TransverseX{};
  return XYRing{trotter_reps};
}

ReferenceResult reference_for(const PreparedInstance& prep, const ReferenceOptions& options) {
  const int p = prep.p;
  const int d = 2 * p;
  const int cap = options.evals_per_layer * p;
  if (cap < d + 1) throw ArgumentError("reference evaluation cap is below 2p+1");
  const auto plan = dfo::plan_for_evaluations(cap, d + 1, cap - (d + 1));
  const QaoaObjective oracle(prep.circuit, p, prep.scaling, prep.objective_sign,
                             QaoaObjective::Mode::Exact);
  const double rhobeg = default_rhobeg(prep.family);

  const dfo::Point u0 = prep.scaling.to_optimizer(prep.initial);
  auto best = dfo::minimize_linear_trust_region(oracle, u0, rhobeg, options.rhoend, plan, 0);
  int evaluations = static_cast<int>(best.records.size());

  std::mt19937_64 rng(derive_seed(options.seed, {0x7265}));
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  for (int s = 0; s < options.extra_starts; ++s) {
    dfo::Point start = u0;
    for (double& v : start) v += jitter(rng);
    auto trace = dfo::minimize_linear_trust_region(oracle, start, rhobeg, options.rhoend, plan, 0);
    evaluations += static_cast<int>(trace.records.size());
    if (trace.best_value < best.best_value) best = std::move(trace);
  }

  ReferenceResult out;
  out.params = prep.scaling.to_params(best.best_point);
  out.ar_opt = exact_ar(prep, out.params);
  out.evaluations = evaluations;
  return out;
}

std::shared_ptr<const LandscapeGrid> build_landscape(const PreparedInstance& prep, int resolution,
                                                     double width, int workers) {
  const std::vector<double> center = flatten(prep.initial);
  const auto bounds = centered_box(center, width);
  return std::make_shared<const LandscapeGrid>(compute_landscape(
      *prep.circuit, prep.p, bounds, resolution, center, kDefaultCellCap, workers));
}

bool landscape_matches(const LandscapeGrid& grid, const PreparedInstance& prep, int resolution,
                       double width) {
  if (grid.resolution != resolution || grid.dims != 2 * prep.p) return false;
  const auto bounds = centered_box(flatten(prep.initial), width);
  return grid.bounds == bounds;
}

}  // namespace

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::ExactSim: return "exact";
    case Backend::SampledSim: return "sampled";
    case Backend::LandscapeOracle: return "landscape";
  }
  return "?";
}

Backend backend_from_string(std::string_view s) {
  if (s == "exact") return Backend::ExactSim;
  if (s == "sampled") return Backend::SampledSim;
  if (s == "landscape") return Backend::LandscapeOracle;
  throw ArgumentError("unknown backend '" + std::string(s) + "' (exact, sampled, landscape)");
}

std::string_view to_string(OptimizerKind o) {
  switch (o) {
    case OptimizerKind::LinearTrustRegion: return "linear_trust_region";
    case OptimizerKind::NelderMead: return "nelder_mead";
    case OptimizerKind::Spsa: return "spsa";
  }
  return "?";
}

OptimizerKind optimizer_from_string(std::string_view s) {
  if (s == "linear_trust_region" || s == "cobyla") return OptimizerKind::LinearTrustRegion;
  if (s == "nelder_mead") return OptimizerKind::NelderMead;
  if (s == "spsa") return OptimizerKind::Spsa;
  throw ArgumentError("unknown optimizer '" + std::string(s) +
                      "' (linear_trust_region, nelder_mead, spsa)");
}

QaoaObjective::QaoaObjective(std::shared_ptr<const QaoaCircuit> circuit, int p,
                             ParamScaling scaling, double sign, Mode mode)
    : circuit_(std::move(circuit)), scaling_(scaling), sign_(sign), mode_(mode), p_(p) {
  if (p < 1) throw ArgumentError("p must be at least 1");
}

int QaoaObjective::dimension() const { return 2 * p_; }

double QaoaObjective::evaluate(std::span<const double> point, long shots,
                               std::uint64_t seed) const {
  const StateVector sv = run_qaoa(*circuit_, scaling_.to_params(point));
  const auto& energies = circuit_->hamiltonian.energies;
  if (mode_ == Mode::Exact) return sign_ * expectation_energy(sv, circuit_->hamiltonian);
  if (shots < 1) throw ArgumentError("sampled objective needs at least one shot");
  const auto samples = sample_bitstrings(sv, static_cast<int>(shots), seed);
  double sum = 0.0;
  for (Bitstring x : samples) sum += energies[x];
  return sign_ * sum / static_cast<double>(samples.size());
}

std::vector<Bitstring> QaoaObjective::sample(std::span<const double> point, long shots,
                                             std::uint64_t seed) const {
  const StateVector sv = run_qaoa(*circuit_, scaling_.to_params(point));
  return sample_bitstrings(sv, static_cast<int>(shots), seed);
}

double exact_ar(const PreparedInstance& prepared, const QaoaParams& params) {
  return expected_ar(run_qaoa(*prepared.circuit, params), prepared.circuit->hamiltonian,
                     prepared.ar);
}

PreparedInstance prepare_instance(const ProblemInstance& inst, int p,
                                  const FixedParameterTable& table,
                                  const PrepareOptions& options) {
  if (p < 1) throw ArgumentError("p must be at least 1");
  PreparedInstance prep;
  RescaledInstance rescaled = rescale_instance(inst);
  prep.rescaled = std::move(rescaled.instance);
  prep.divisor = rescaled.divisor;
  prep.family = family_for(prep.rescaled);
  prep.p = p;
  prep.circuit = std::make_shared<const QaoaCircuit>(
      make_circuit(prep.rescaled, mixer_for(prep.rescaled, options.trotter_reps)));
  prep.ar = make_ar_context(prep.rescaled, prep.circuit->hamiltonian);
  prep.initial = transfer_parameters(prep.family, initial_parameters(prep.family, p, table),
                                     num_qubits(prep.rescaled));
  prep.scaling = build_param_scaling(prep.initial);
  prep.objective_sign = kind_of(prep.rescaled) == ProblemKind::MaxCut ? -1.0 : 1.0;
  prep.ar_ini = exact_ar(prep, prep.initial);
  prep.reference = reference_for(prep, options.reference);
  if (options.landscape_resolution > 0) {
    prep.landscape = build_landscape(prep, options.landscape_resolution,
                                     options.landscape_width, options.workers);
  }
  return prep;
}

ReferenceResult optimize_reference(const ProblemInstance& inst, int p,
                                   const FixedParameterTable& table,
                                   const ReferenceOptions& options) {
  PrepareOptions prep_options;
  prep_options.reference = options;
  return prepare_instance(inst, p, table, prep_options).reference;
}

ProtocolResult run_protocol(const PreparedInstance& prepared, const ProtocolConfig& config) {
  ProtocolResult result;
  result.p = prepared.p;
  result.family = prepared.family;
  result.config = config;
  const double rhobeg = config.rhobeg.value_or(default_rhobeg(prepared.family));
  const double rhoend = config.rhoend.value_or(1e-4 * rhobeg);
  if (!(rhobeg > 0.0) || !(rhoend > 0.0)) throw ArgumentError("rhobeg and rhoend must be positive");
  result.config.rhobeg = rhobeg;
  result.config.rhoend = rhoend;
  result.plan = dfo::allocate_budget(config.total_shots, prepared.p, config.extra_evals,
                                     dfo::ModelKind::Linear);
  result.scaling = prepared.scaling;
  result.initial_params = prepared.initial;
  result.reference_params = prepared.reference.params;
  result.divisor = prepared.divisor;

  std::unique_ptr<dfo::ObjectiveOracle> oracle;
  const LandscapeOracle* landscape_oracle = nullptr;
  switch (config.backend) {
    case Backend::ExactSim:
    case Backend::SampledSim:
      oracle = std::make_unique<QaoaObjective>(
          prepared.circuit, prepared.p, prepared.scaling, prepared.objective_sign,
          config.backend == Backend::ExactSim ? QaoaObjective::Mode::Exact
                                              : QaoaObjective::Mode::Sampled);
      break;
    case Backend::LandscapeOracle: {
      auto grid = prepared.landscape;
      if (!grid || !landscape_matches(*grid, prepared, config.landscape_resolution,
                                      config.landscape_width)) {
        grid = build_landscape(prepared, config.landscape_resolution, config.landscape_width,
                               default_worker_count());
      }
      const ParamScaling scaling = prepared.scaling;
      auto lo = std::make_unique<LandscapeOracle>(
          grid, [scaling](std::span<const double> u) { return flatten(scaling.to_params(u)); },
          prepared.objective_sign);
      landscape_oracle = lo.get();
      oracle = std::move(lo);
      break;
    }
  }

  const dfo::Point u0 = prepared.scaling.to_optimizer(prepared.initial);
  switch (config.optimizer) {
    case OptimizerKind::LinearTrustRegion:
      result.trace =
          dfo::minimize_linear_trust_region(*oracle, u0, rhobeg, rhoend, result.plan, config.seed);
      break;
    case OptimizerKind::NelderMead:
      result.trace = dfo::minimize_nelder_mead(*oracle, u0, rhobeg, result.plan, config.seed);
      break;
    case OptimizerKind::Spsa:
      result.trace = dfo::minimize_spsa(*oracle, u0, config.spsa, config.spsa_iterations,
                                        result.plan, config.seed);
      break;
  }
  if (landscape_oracle != nullptr) result.clamp_events = landscape_oracle->clamp_events();

  result.final_params = prepared.scaling.to_params(result.trace.best_point);
  result.ar_ini = prepared.ar_ini;
  result.ar_final = exact_ar(prepared, result.final_params);
  result.ar_opt = prepared.reference.ar_opt;
  if (std::abs(result.ar_opt - result.ar_ini) >= kDegenerateGap) {
    result.relative_improvement =
        relative_ar_improvement(result.ar_final, result.ar_ini, result.ar_opt);
  }
  return result;
}

ProtocolResult run_protocol(const ProblemInstance& inst, int p, const ProtocolConfig& config,
                            const FixedParameterTable& table) {
  PrepareOptions options;
  options.trotter_reps = config.trotter_reps;
  if (config.backend == Backend::LandscapeOracle) {
    options.landscape_resolution = config.landscape_resolution;
    options.landscape_width = config.landscape_width;
    options.workers = default_worker_count();
  }
  return run_protocol(prepare_instance(inst, p, table, options), config);
}

}  // namespace qaoa
