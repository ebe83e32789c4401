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

#pragma once

// End-to-end parameter setting: rescale the instance, look up fixed initial
// parameters, normalize them for the optimizer, split the shot budget, fine
// tune, and report exact-evaluation approximation ratios.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string_view>

#include "json.hpp"
#include "qaoa/dfo.hpp"
#include "qaoa/landscape.hpp"
#include "qaoa/metrics.hpp"
#include "qaoa/problems.hpp"
#include "qaoa/simulator.hpp"

namespace qaoa {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

enum class ProblemFamily { MaxCut3Regular, SKModelForPO };

std::string_view to_string(ProblemFamily f);
ProblemFamily family_from_string(std::string_view s);
ProblemFamily family_for(const ProblemInstance& inst);

/// Initial step size used when none is configured: 0.1 for MaxCut, 0.5 for
/// portfolios (in optimizer coordinates).
double default_rhobeg(ProblemFamily f);

/// Fixed (instance-independent) QAOA angles per (family, p). MaxCut entries are
/// the 3-regular fixed angles in this library's convention, exp(-i gamma C)
/// with C the cut value. SK entries are kept in their published convention
/// and converted per instance by transfer_parameters.
class FixedParameterTable {
 public:
  /// Compiled-in copy of data/fixed_parameters.json.
  static FixedParameterTable builtin();
  static FixedParameterTable from_json(const nlohmann::json& j);
  static FixedParameterTable load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  void set(ProblemFamily family, QaoaParams params);
  const QaoaParams* find(ProblemFamily family, int p) const;
  bool operator==(const FixedParameterTable&) const = default;

 private:
  std::map<std::pair<ProblemFamily, int>, QaoaParams> entries_;
};

/// The table entry verbatim. Throws MissingEntryError naming (family, p).
QaoaParams initial_parameters(ProblemFamily family, int p, const FixedParameterTable& table);

/// Converts a table entry into angles for a concrete rescaled instance with n
/// variables. MaxCut: identity. SK -> portfolio: gamma / sqrt(n), -beta.
QaoaParams transfer_parameters(ProblemFamily family, const QaoaParams& entry, int n);

/// Optimizer coordinates u = (gamma / s_gamma, beta / s_beta).
struct ParamScaling {
  double s_gamma = 1.0;
  double s_beta = 1.0;

  dfo::Point to_optimizer(const QaoaParams& params) const;
  QaoaParams to_params(std::span<const double> u) const;
};

/// s_gamma = max |gamma_i|, s_beta = max |beta_i|; an all-zero family gets 1.
ParamScaling build_param_scaling(const QaoaParams& initial);

enum class Backend { ExactSim, SampledSim, LandscapeOracle };
enum class OptimizerKind { LinearTrustRegion, NelderMead, Spsa };

std::string_view to_string(Backend b);
Backend backend_from_string(std::string_view s);
std::string_view to_string(OptimizerKind o);
OptimizerKind optimizer_from_string(std::string_view s);

struct ProtocolConfig {
  long total_shots = 10000;
  int extra_evals = 2;
  std::optional<double> rhobeg;  // family default when empty
  std::optional<double> rhoend;  // 1e-4 * rhobeg when empty
  OptimizerKind optimizer = OptimizerKind::LinearTrustRegion;
  Backend backend = Backend::SampledSim;
  std::uint64_t seed = 0;
  int trotter_reps = 1;
  int landscape_resolution = kDefaultResolution;
  double landscape_width = kDefaultBoxWidth;
  dfo::SpsaGains spsa;
  int spsa_iterations = 1000;  // capped by the evaluation budget
};

struct ReferenceOptions {
  int evals_per_layer = 500;
  double rhoend = 1e-6;
  /// Extra random starts around the initial point; 0 means single start.
  int extra_starts = 0;
  std::uint64_t seed = 0;
};

struct ReferenceResult {
  QaoaParams params;
  double ar_opt = 0.0;
  int evaluations = 0;
};

/// Minimization objective over optimizer coordinates: energy for portfolios,
/// negated cut value for MaxCut. Exact mode ignores shots and seed; sampled
/// mode averages the energy of `shots` measured bitstrings.
class QaoaObjective final : public dfo::ObjectiveOracle {
 public:
  enum class Mode { Exact, Sampled };

  QaoaObjective(std::shared_ptr<const QaoaCircuit> circuit, int p, ParamScaling scaling,
                double sign, Mode mode);

  int dimension() const override;
  double evaluate(std::span<const double> point, long shots, std::uint64_t seed) const override;
  std::vector<Bitstring> sample(std::span<const double> point, long shots,
                                std::uint64_t seed) const;

 private:
  std::shared_ptr<const QaoaCircuit> circuit_;
  ParamScaling scaling_;
  double sign_;
  Mode mode_;
  int p_;
};

/// Everything about an instance that does not depend on the fine-tuning
/// configuration, including the exact reference optimum.
struct PreparedInstance {
  ProblemInstance rescaled;
  double divisor = 1.0;
  ProblemFamily family = ProblemFamily::MaxCut3Regular;
  int p = 1;
  std::shared_ptr<const QaoaCircuit> circuit;
  ArContext ar;
  QaoaParams initial;
  ParamScaling scaling;
  double objective_sign = 1.0;
  double ar_ini = 0.0;
  ReferenceResult reference;
  std::shared_ptr<const LandscapeGrid> landscape;  // built on request
};

struct PrepareOptions {
  int trotter_reps = 1;
  ReferenceOptions reference;
  /// Resolution of the landscape to precompute; 0 skips it.
  int landscape_resolution = 0;
  double landscape_width = kDefaultBoxWidth;
  int workers = 1;
};

PreparedInstance prepare_instance(const ProblemInstance& inst, int p,
                                  const FixedParameterTable& table,
                                  const PrepareOptions& options = {});

/// Exact AR of the circuit state at `params`.
double exact_ar(const PreparedInstance& prepared, const QaoaParams& params);

/// Noiseless linear trust-region run from the protocol initial point with
/// evals_per_layer * p evaluations and the family default rhobeg.
ReferenceResult optimize_reference(const ProblemInstance& inst, int p,
                                   const FixedParameterTable& table,
                                   const ReferenceOptions& options = {});

struct ProtocolResult {
  int p = 1;
  ProblemFamily family = ProblemFamily::MaxCut3Regular;
  ProtocolConfig config;  // rhobeg/rhoend resolved
  dfo::BudgetPlan plan;
  ParamScaling scaling;
  QaoaParams initial_params;
  QaoaParams final_params;
  QaoaParams reference_params;
  dfo::OptimizationTrace trace;  // points in optimizer coordinates
  double ar_ini = 0.0;
  double ar_final = 0.0;
  double ar_opt = 0.0;
  /// Empty when |ar_opt - ar_ini| is below kDegenerateGap.
  std::optional<double> relative_improvement;
  double divisor = 1.0;
  long clamp_events = 0;

  bool degenerate() const { return !relative_improvement.has_value(); }
};

ProtocolResult run_protocol(const PreparedInstance& prepared, const ProtocolConfig& config);
ProtocolResult run_protocol(const ProblemInstance& inst, int p, const ProtocolConfig& config,
                            const FixedParameterTable& table);

nlohmann::json result_to_json(const ProtocolResult& result);
ProtocolResult result_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ProtocolConfig& config);
ProtocolConfig config_from_json(const nlohmann::json& j);

/// Energy operator of an SK instance, sum_{i<j} J_ij Z_i Z_j / sqrt(n).
DiagonalHamiltonian sk_hamiltonian(const MaxCutInstance& couplings);

struct FallbackTableOptions {
  int max_p = 7;
  int instances = 20;
  int n = 10;
  std::uint64_t seed = 0;
  int evals_per_layer = 500;
};

/// Parameter-concentration construction: optimizes exact angles on random
/// unweighted 3-regular graphs (MaxCut family) or SK instances (SK family),
/// p = 1 from a grid search and p + 1 from interpolating the depth-p optimum,
/// and averages the optima per p. Entries use the table convention.
FixedParameterTable generate_fixed_parameter_table(ProblemFamily family,
                                                   const FallbackTableOptions& options);

}  // namespace qaoa
