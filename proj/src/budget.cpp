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

#include "qaoa/dfo.hpp"
#include "qaoa/error.hpp"

namespace qaoa::dfo {

FunctionOracle FunctionOracle::noiseless(int dimension,
                                         std::function<double(std::span<const double>)> f) {
  return FunctionOracle(dimension,
                        [f = std::move(f)](std::span<const double> x, long, std::uint64_t) {
                          return f(x);
                        });
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::EvaluationBudget:
      return "evaluation_budget";
    case Termination::TrustRegionConverged:
      return "trust_region_converged";
    case Termination::ZeroModelGradient:
      return "zero_model_gradient";
    case Termination::SimplexCollapsed:
      return "simplex_collapsed";
    case Termination::IterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

int model_evaluations(int dimension, ModelKind model) {
  if (dimension < 1) throw ArgumentError("dimension must be >= 1");
  if (model == ModelKind::Linear) return dimension + 1;
  return (dimension + 1) * (dimension + 2) / 2;
}

BudgetPlan plan_for_evaluations(long total_shots, int initial_evals, int extra_evals) {
  if (initial_evals < 1) throw ArgumentError("need at least one initial evaluation");
  if (extra_evals < 0) throw ArgumentError("extra evaluations must be non-negative");
  const long evals = static_cast<long>(initial_evals) + extra_evals;
  if (total_shots < evals) {
    throw InfeasibleBudgetError("budget of " + std::to_string(total_shots) +
                                " shots cannot cover " + std::to_string(evals) +
                                " evaluations");
  }
  return {total_shots, initial_evals, extra_evals, total_shots / evals};
}

BudgetPlan allocate_budget(long total_shots, int p, int extra_evals, ModelKind model) {
  if (p < 1) throw ArgumentError("QAOA depth must be >= 1");
  return plan_for_evaluations(total_shots, model_evaluations(2 * p, model), extra_evals);
}

}  // namespace qaoa::dfo
