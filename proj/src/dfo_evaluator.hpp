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

#include "qaoa/dfo.hpp"
#include "qaoa/error.hpp"
#include "qaoa/seeding.hpp"

namespace qaoa::dfo::detail {

/// Shot-metered evaluation counter that appends to a trace and keeps the
/// best-so-far (earliest wins ties).
class MeteredEvaluator {
 public:
  MeteredEvaluator(const ObjectiveOracle& oracle, const BudgetPlan& plan, std::uint64_t seed,
                   OptimizationTrace& trace)
      : oracle_(oracle), plan_(plan), seed_(seed), trace_(trace) {
    if (plan.shots_per_eval < 1) throw InfeasibleBudgetError("plan has zero shots per evaluation");
    if (plan.initial_evals < 0 || plan.extra_evals < 0) {
      throw ArgumentError("evaluation counts must be non-negative");
    }
  }

  bool exhausted() const {
    const auto used = static_cast<long>(trace_.records.size());
    return used >= plan_.max_evals() || trace_.shots_used() + plan_.shots_per_eval > plan_.total_shots;
  }

  int remaining() const {
    return exhausted() ? 0 : plan_.max_evals() - static_cast<int>(trace_.records.size());
  }

  double operator()(const Point& x) {
    if (exhausted()) throw InfeasibleBudgetError("evaluation budget exhausted");
    const auto index = static_cast<std::uint64_t>(trace_.records.size());
    const double value = oracle_.evaluate(x, plan_.shots_per_eval, derive_seed(seed_, {index}));
    trace_.records.push_back(
        {x, value, plan_.shots_per_eval, trace_.shots_used() + plan_.shots_per_eval});
    if (value < trace_.best_value || trace_.best_point.empty()) {
      trace_.best_value = value;
      trace_.best_point = x;
    }
    return value;
  }

 private:
  const ObjectiveOracle& oracle_;
  const BudgetPlan& plan_;
  std::uint64_t seed_;
  OptimizationTrace& trace_;
};

inline void check_start(const ObjectiveOracle& oracle, std::span<const double> x0) {
  if (static_cast<int>(x0.size()) != oracle.dimension() || x0.empty()) {
    throw DimensionError("start point has " + std::to_string(x0.size()) +
                         " coordinates, oracle expects " + std::to_string(oracle.dimension()));
  }
}

}  // namespace qaoa::dfo::detail
