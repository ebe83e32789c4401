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
#include <numeric>

#include "dfo_evaluator.hpp"

namespace qaoa::dfo {
namespace {

struct Vertex {
  Point x;
  double f;
  std::size_t order;
};

Point affine(const Point& base, const Point& toward, double t) {
  Point out(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) out[k] = base[k] + t * (toward[k] - base[k]);
  return out;
}

double diameter(const std::vector<Vertex>& simplex) {
  double best = 0.0;
  for (const auto& v : simplex) {
    double s = 0.0;
    for (std::size_t k = 0; k < v.x.size(); ++k) {
      const double dx = v.x[k] - simplex.front().x[k];
      s += dx * dx;
    }
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

}  // namespace

OptimizationTrace minimize_nelder_mead(const ObjectiveOracle& oracle,
                                       std::span<const double> x0, double initial_step,
                                       const BudgetPlan& plan, std::uint64_t seed,
                                       const NelderMeadCoefficients& coeffs) {
  detail::check_start(oracle, x0);
  const int d = oracle.dimension();
  if (!(initial_step > 0.0)) throw ArgumentError("initial step must be positive");
  if (plan.initial_evals != d + 1) {
    throw ArgumentError("Nelder-Mead needs " + std::to_string(d + 1) +
                        " initial evaluations, plan has " + std::to_string(plan.initial_evals));
  }

  OptimizationTrace trace;
  detail::MeteredEvaluator eval(oracle, plan, seed, trace);
  std::size_t order = 0;
  auto vertex = [&](Point x) {
    const double f = eval(x);
    return Vertex{std::move(x), f, order++};
  };

  std::vector<Vertex> simplex;
  Point start(x0.begin(), x0.end());
  simplex.push_back(vertex(start));
  for (int i = 0; i < d; ++i) {
    Point x = start;
    x[i] += initial_step;
    simplex.push_back(vertex(std::move(x)));
  }

  auto by_value = [](const Vertex& a, const Vertex& b) {
    return a.f < b.f || (a.f == b.f && a.order < b.order);
  };

  trace.termination = Termination::EvaluationBudget;
  while (!eval.exhausted()) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    if (diameter(simplex) < 1e-14) {
      trace.termination = Termination::SimplexCollapsed;
      break;
    }
    Vertex& worst = simplex.back();
    Point centroid(d, 0.0);
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < d; ++k) centroid[k] += simplex[i].x[k] / d;
    }

    Vertex reflected = vertex(affine(centroid, worst.x, -coeffs.reflection));
    if (reflected.f < simplex.front().f) {
      if (eval.exhausted()) {
        worst = std::move(reflected);
        break;
      }
      Vertex expanded = vertex(affine(centroid, reflected.x, coeffs.expansion));
      worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
      continue;
    }
    if (reflected.f < simplex[d - 1].f) {
      worst = std::move(reflected);
      continue;
    }
    if (eval.exhausted()) break;
    const bool outside = reflected.f < worst.f;
    Vertex contracted =
        outside ? vertex(affine(centroid, reflected.x, coeffs.contraction))
                : vertex(affine(centroid, worst.x, coeffs.contraction));
    if (outside ? contracted.f <= reflected.f : contracted.f < worst.f) {
      worst = std::move(contracted);
      continue;
    }
    for (int i = 1; i <= d && !eval.exhausted(); ++i) {
      simplex[i] = vertex(affine(simplex.front().x, simplex[i].x, coeffs.shrink));
    }
  }
  std::sort(simplex.begin(), simplex.end(), by_value);
  trace.final_iterate = simplex.front().x;
  return trace;
}

}  // namespace qaoa::dfo
