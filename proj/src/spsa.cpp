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

#include "dfo_evaluator.hpp"

namespace qaoa::dfo {

OptimizationTrace minimize_spsa(const ObjectiveOracle& oracle, std::span<const double> x0,
                                const SpsaGains& gains, int iterations, const BudgetPlan& plan,
                                std::uint64_t seed) {
  detail::check_start(oracle, x0);
  if (iterations < 1) throw ArgumentError("SPSA needs at least one iteration");
  if (plan.max_evals() < 2) {
    throw InfeasibleBudgetError("SPSA needs two evaluations per iteration");
  }
  const int d = oracle.dimension();
  const int steps = std::min(iterations, plan.max_evals() / 2);
  const double stability = 0.1 * steps;

  OptimizationTrace trace;
  detail::MeteredEvaluator eval(oracle, plan, seed, trace);
  std::mt19937_64 rng(derive_seed(seed, {0x5b5aULL}));
  std::bernoulli_distribution coin(0.5);

  Point x(x0.begin(), x0.end());
  Point delta(d);
  trace.termination = Termination::IterationLimit;
  for (int k = 0; k < steps; ++k) {
    if (eval.remaining() < 2) {
      trace.termination = Termination::EvaluationBudget;
      break;
    }
    const double ak = gains.a / std::pow(k + 1 + stability, gains.alpha);
    const double ck = gains.c / std::pow(k + 1, gains.gamma);
    for (double& v : delta) v = coin(rng) ? 1.0 : -1.0;
    Point plus = x;
    Point minus = x;
    for (int i = 0; i < d; ++i) {
      plus[i] += ck * delta[i];
      minus[i] -= ck * delta[i];
    }
    const double fp = eval(plus);
    const double fm = eval(minus);
    for (int i = 0; i < d; ++i) x[i] -= ak * (fp - fm) / (2.0 * ck * delta[i]);
  }
  if (steps < iterations && trace.termination == Termination::IterationLimit) {
    trace.termination = Termination::EvaluationBudget;
  }
  trace.final_iterate = x;
  return trace;
}

}  // namespace qaoa::dfo
