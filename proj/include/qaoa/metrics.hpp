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

#include <optional>
#include <span>

#include "qaoa/problems.hpp"
#include "qaoa/simulator.hpp"

namespace qaoa {

/// Normalization data for approximation ratios. Portfolio contexts carry the
/// budget and weight-restricted extremes.
struct ArContext {
  SpectrumExtremes extremes;
  ProblemKind kind = ProblemKind::MaxCut;
  std::optional<int> budget;
};

/// Builds the context by exhaustive enumeration of h. Throws DegenerateError
/// when f_min == f_max.
ArContext make_ar_context(const DiagonalHamiltonian& h, ProblemKind kind,
                          std::optional<int> budget = std::nullopt);
ArContext make_ar_context(const ProblemInstance& inst, const DiagonalHamiltonian& h);

/// AR of a solution with objective `value` and Hamming weight `weight`.
/// MaxCut: (f - f_min)/(f_max - f_min). Portfolio: 0 when weight != K, else
/// (f - f_max)/(f_min - f_max). Clamped to [0, 1].
double approximation_ratio(double value, int weight, const ArContext& ctx);
double approximation_ratio(const DiagonalHamiltonian& h, Bitstring x, const ArContext& ctx);

/// Exact expectation of AR over |amps|^2.
double expected_ar(const StateVector& sv, const DiagonalHamiltonian& h, const ArContext& ctx);

struct MeanWithError {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Sample mean of AR and sample-std / sqrt(M). Throws ArgumentError on empty input.
MeanWithError sample_mean_ar(std::span<const Bitstring> samples, const DiagonalHamiltonian& h,
                             const ArContext& ctx);

inline constexpr double kDegenerateGap = 1e-12;

/// (ar_x - ar_ini) / (ar_opt - ar_ini). Throws DegenerateError when the gap is
/// below kDegenerateGap.
double relative_ar_improvement(double ar_x, double ar_ini, double ar_opt);

/// Mean and standard error of a list of values, sample-std / sqrt(n).
MeanWithError mean_and_stderr(std::span<const double> values);

}  // namespace qaoa
