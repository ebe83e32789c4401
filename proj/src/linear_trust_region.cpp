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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>

#include "dfo_evaluator.hpp"

namespace qaoa::dfo {
namespace {

struct Vertex {
  Point x;
  double f;
  std::size_t order;  // evaluation index, breaks ties
};

std::size_t best_index(const std::vector<Vertex>& simplex) {
  return static_cast<std::size_t>(
      std::min_element(simplex.begin(), simplex.end(),
                       [](const Vertex& a, const Vertex& b) {
                         return a.f < b.f || (a.f == b.f && a.order < b.order);
                       }) -
      simplex.begin());
}

std::size_t worst_index(const std::vector<Vertex>& simplex) {
  return static_cast<std::size_t>(
      std::max_element(simplex.begin(), simplex.end(),
                       [](const Vertex& a, const Vertex& b) {
                         return a.f < b.f || (a.f == b.f && a.order < b.order);
                       }) -
      simplex.begin());
}

/// Gradient of the linear interpolant through the simplex, or nullopt when
/// the displacement matrix is singular.
std::optional<Eigen::VectorXd> interpolant_gradient(const std::vector<Vertex>& simplex,
                                                    std::size_t base) {
  const auto d = static_cast<Eigen::Index>(simplex.front().x.size());
  Eigen::MatrixXd a(d, d);
  Eigen::VectorXd rhs(d);
  Eigen::Index row = 0;
  for (std::size_t j = 0; j < simplex.size(); ++j) {
    if (j == base) continue;
    for (Eigen::Index k = 0; k < d; ++k) a(row, k) = simplex[j].x[k] - simplex[base].x[k];
    rhs(row) = simplex[j].f - simplex[base].f;
    ++row;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  if (lu.rank() < d) return std::nullopt;
  return Eigen::VectorXd(lu.solve(rhs));
}

}  // namespace

OptimizationTrace minimize_linear_trust_region(const ObjectiveOracle& oracle,
                                               std::span<const double> x0, double rhobeg,
                                               double rhoend, const BudgetPlan& plan,
                                               std::uint64_t seed) {
  detail::check_start(oracle, x0);
  const int d = oracle.dimension();
  if (!(rhobeg > 0.0)) throw ArgumentError("rhobeg must be positive");
  if (!(rhoend < rhobeg)) throw ArgumentError("rhoend must be smaller than rhobeg");
  if (plan.initial_evals != d + 1) {
    throw ArgumentError("linear model needs " + std::to_string(d + 1) +
                        " initial evaluations, plan has " + std::to_string(plan.initial_evals));
  }

  OptimizationTrace trace;
  detail::MeteredEvaluator eval(oracle, plan, seed, trace);

  std::vector<Vertex> simplex;
  simplex.reserve(d + 1);
  Point start(x0.begin(), x0.end());
  simplex.push_back({start, eval(start), 0});
  for (int i = 0; i < d; ++i) {
    Point x = start;
    x[i] += rhobeg;
    simplex.push_back({x, eval(x), static_cast<std::size_t>(i + 1)});
  }

  double rho = rhobeg;
  trace.termination = Termination::EvaluationBudget;
  while (!eval.exhausted()) {
    const std::size_t b = best_index(simplex);
    auto grad = interpolant_gradient(simplex, b);
    if (!grad) {
      // Nudge the non-best vertices off the degenerate hyperplane and retry once.
      std::size_t axis = 0;
      for (std::size_t j = 0; j < simplex.size(); ++j) {
        if (j == b) continue;
        simplex[j].x[axis++ % d] += 1e-8 * rhobeg;
      }
      grad = interpolant_gradient(simplex, b);
      if (!grad) throw DegenerateSimplexError("linear interpolation system is singular");
    }
    const double gnorm = grad->norm();
    if (!(gnorm > 0.0) || !std::isfinite(gnorm)) {
      trace.termination = Termination::ZeroModelGradient;
      break;
    }

    Point x = simplex[b].x;
    for (int k = 0; k < d; ++k) x[k] -= rho * (*grad)(k) / gnorm;
    const double base_value = simplex[b].f;
    const double f = eval(x);
    trace.model_steps.push_back({trace.records.size() - 1, rho, base_value, simplex[b].x,
                                 Point(grad->data(), grad->data() + d)});

    const std::size_t w = worst_index(simplex);
    if (f < simplex[w].f) simplex[w] = {x, f, trace.records.size() - 1};
    if (!(f < base_value)) {
      rho *= 0.5;
      if (rho < rhoend) {
        trace.termination = Termination::TrustRegionConverged;
        break;
      }
    }
  }
  trace.final_iterate = simplex[best_index(simplex)].x;
  return trace;
}

}  // namespace qaoa::dfo
