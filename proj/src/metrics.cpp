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

#include "qaoa/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "qaoa/error.hpp"

namespace qaoa {

ArContext make_ar_context(const DiagonalHamiltonian& h, ProblemKind kind,
                          std::optional<int> budget) {
  if (kind == ProblemKind::Portfolio && !budget) {
    throw ArgumentError("portfolio AR context needs the budget K");
  }
  ArContext ctx;
  ctx.kind = kind;
  ctx.budget = kind == ProblemKind::Portfolio ? budget : std::nullopt;
  ctx.extremes = spectrum_extremes(h, ctx.budget);
  if (ctx.extremes.f_max == ctx.extremes.f_min) {
    throw DegenerateError("objective is constant over the feasible set; AR undefined");
  }
  return ctx;
}

ArContext make_ar_context(const ProblemInstance& inst, const DiagonalHamiltonian& h) {
  return make_ar_context(h, kind_of(inst), feasible_weight(inst));
}

double approximation_ratio(double value, int weight, const ArContext& ctx) {
  const auto& e = ctx.extremes;
  if (e.f_max == e.f_min) throw DegenerateError("f_max == f_min; AR undefined");
  double ar = 0.0;
  if (ctx.kind == ProblemKind::MaxCut) {
    ar = (value - e.f_min) / (e.f_max - e.f_min);
  } else {
    if (weight != *ctx.budget) return 0.0;
    ar = (value - e.f_max) / (e.f_min - e.f_max);
  }
  return std::clamp(ar, 0.0, 1.0);
}

double approximation_ratio(const DiagonalHamiltonian& h, Bitstring x, const ArContext& ctx) {
  if (x >= h.energies.size()) throw ArgumentError("bitstring has more than n bits");
  return approximation_ratio(h.energies[x], hamming_weight(x), ctx);
}

double expected_ar(const StateVector& sv, const DiagonalHamiltonian& h, const ArContext& ctx) {
  if (sv.size() != h.energies.size()) throw DimensionError("state/Hamiltonian size mismatch");
  const auto amps = sv.amplitudes();
  double acc = 0.0;
  for (std::size_t x = 0; x < amps.size(); ++x) {
    const double p = std::norm(amps[x]);
    if (p != 0.0) acc += p * approximation_ratio(h.energies[x], hamming_weight(x), ctx);
  }
  return acc;
}

MeanWithError mean_and_stderr(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("mean of an empty sample");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

MeanWithError sample_mean_ar(std::span<const Bitstring> samples, const DiagonalHamiltonian& h,
                             const ArContext& ctx) {
  if (samples.empty()) throw ArgumentError("sample_mean_ar: no samples");
  std::vector<double> ars;
  ars.reserve(samples.size());
  for (Bitstring x : samples) ars.push_back(approximation_ratio(h, x, ctx));
  return mean_and_stderr(ars);
}

double relative_ar_improvement(double ar_x, double ar_ini, double ar_opt) {
  if (std::abs(ar_opt - ar_ini) < kDegenerateGap) {
    throw DegenerateError("AR_opt and AR_ini coincide; relative improvement undefined");
  }
  return (ar_x - ar_ini) / (ar_opt - ar_ini);
}

}  // namespace qaoa
