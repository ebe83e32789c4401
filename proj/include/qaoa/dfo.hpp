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

// Derivative-free minimizers driven through a shot-metered objective oracle,
// and the equal-split shot budget allocator.
//
// Every optimizer evaluates the objective at most plan.max_evals() times with
// plan.shots_per_eval shots each. Evaluation k receives the seed
// derive_seed(seed, {k}), so a run is reproducible from (oracle, x0,
// hyperparameters, seed).

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace qaoa::dfo {

using Point = std::vector<double>;

class ObjectiveOracle {
 public:
  virtual ~ObjectiveOracle() = default;

  virtual int dimension() const = 0;
  /// Must be deterministic in (point, shots, seed) and tolerate concurrent
  /// calls from independent runs.
  virtual double evaluate(std::span<const double> point, long shots,
                          std::uint64_t seed) const = 0;
};

/// Adapts a callable to the oracle contract.
class FunctionOracle final : public ObjectiveOracle {
 public:
  using Fn = std::function<double(std::span<const double>, long, std::uint64_t)>;

  FunctionOracle(int dimension, Fn fn) : dimension_(dimension), fn_(std::move(fn)) {}
  /// Noiseless objective; shots and seed are ignored.
  static FunctionOracle noiseless(int dimension, std::function<double(std::span<const double>)> f);

  int dimension() const override { return dimension_; }
  double evaluate(std::span<const double> point, long shots, std::uint64_t seed) const override {
    return fn_(point, shots, seed);
  }

 private:
  int dimension_;
  Fn fn_;
};

enum class ModelKind { Linear, Quadratic };

struct BudgetPlan {
  long total_shots = 0;
  int initial_evals = 0;
  int extra_evals = 0;
  long shots_per_eval = 0;

  int max_evals() const { return initial_evals + extra_evals; }
};

/// Evaluations needed to determine a model in `dimension` variables:
/// d+1 (linear) or (d+1)(d+2)/2 (quadratic).
int model_evaluations(int dimension, ModelKind model);

/// Equal split for a p-layer QAOA (2p parameters):
/// shots_per_eval = floor(total / (initial + extra)). Throws
/// InfeasibleBudgetError when that is zero.
BudgetPlan allocate_budget(long total_shots, int p, int extra_evals, ModelKind model);

/// Equal split with an explicit initial evaluation count.
BudgetPlan plan_for_evaluations(long total_shots, int initial_evals, int extra_evals);

struct EvaluationRecord {
  Point point;
  double value = 0.0;
  long shots = 0;
  long cumulative_shots = 0;
};

enum class Termination {
  EvaluationBudget,
  TrustRegionConverged,
  ZeroModelGradient,
  SimplexCollapsed,
  IterationLimit,
};

std::string_view to_string(Termination t);

/// Linear-model step diagnostics: the model built on the simplex with best
/// vertex value `base_value`, its gradient, and the radius used for the step
/// that produced records[record_index].
struct ModelStep {
  std::size_t record_index = 0;
  double radius = 0.0;
  double base_value = 0.0;
  Point base_point;
  Point gradient;
};

struct OptimizationTrace {
  std::vector<EvaluationRecord> records;
  Point best_point;
  double best_value = std::numeric_limits<double>::infinity();
  Termination termination = Termination::EvaluationBudget;
  /// Optimizer's own final iterate (SPSA's x_k; the best vertex otherwise).
  Point final_iterate;
  std::vector<ModelStep> model_steps;

  long shots_used() const { return records.empty() ? 0 : records.back().cumulative_shots; }
};

/// Simplified COBYLA without constraints. Evaluates x0 and x0 + rhobeg e_i,
/// then repeatedly fits the linear interpolant on the current d+1 vertices and
/// steps a distance rho from the best vertex against the model gradient. The
/// new point replaces the worst vertex when it beats it; rho halves whenever
/// the new point does not beat the best. Stops on budget or rho < rhoend.
/// Requires plan.initial_evals == d + 1. Returns the best sampled point.
OptimizationTrace minimize_linear_trust_region(const ObjectiveOracle& oracle,
                                               std::span<const double> x0, double rhobeg,
                                               double rhoend, const BudgetPlan& plan,
                                               std::uint64_t seed);

struct NelderMeadCoefficients {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

OptimizationTrace minimize_nelder_mead(const ObjectiveOracle& oracle,
                                       std::span<const double> x0, double initial_step,
                                       const BudgetPlan& plan, std::uint64_t seed,
                                       const NelderMeadCoefficients& coeffs = {});

/// a_k = a / (k + 1 + A)^alpha, c_k = c / (k + 1)^gamma, A = 0.1 * iterations.
struct SpsaGains {
  double a = 0.2;
  double c = 0.1;
  double alpha = 0.602;
  double gamma = 0.101;
};

/// Runs min(iterations, plan.max_evals() / 2) iterations, two evaluations each.
OptimizationTrace minimize_spsa(const ObjectiveOracle& oracle, std::span<const double> x0,
                                const SpsaGains& gains, int iterations, const BudgetPlan& plan,
                                std::uint64_t seed);

}  // namespace qaoa::dfo
