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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qaoa/error.hpp"
#include "qaoa/metrics.hpp"

using namespace qaoa;

namespace {

MaxCutInstance triangle() { return {3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}}; }

}  // namespace

TEST(ApproximationRatio, MaxCutEndpoints) {
  const auto h = build_maxcut_hamiltonian(triangle());
  const auto ctx = make_ar_context(h, ProblemKind::MaxCut);
  EXPECT_EQ(approximation_ratio(h, ctx.extremes.argmax, ctx), 1.0);
  EXPECT_EQ(approximation_ratio(h, ctx.extremes.argmin, ctx), 0.0);
}

TEST(ApproximationRatio, PortfolioInfeasibleIsZeroAndArgminIsOne) {
  std::mt19937_64 rng(1);
  const auto po = oracle::random_portfolio(6, rng);
  const auto h = build_po_hamiltonian(po);
  const auto ctx = make_ar_context(po, h);
  for (Bitstring x = 0; x < h.dimension(); ++x) {
    if (hamming_weight(x) != po.budget) EXPECT_EQ(approximation_ratio(h, x, ctx), 0.0);
  }
  EXPECT_EQ(approximation_ratio(h, ctx.extremes.argmin, ctx), 1.0);
  EXPECT_EQ(approximation_ratio(h, ctx.extremes.argmax, ctx), 0.0);
}

TEST(ApproximationRatio, DegenerateSpectrum) {
  DiagonalHamiltonian flat{2, {1.0, 1.0, 1.0, 1.0}, 0.0};
  EXPECT_THROW(make_ar_context(flat, ProblemKind::MaxCut), DegenerateError);
}

TEST(ExpectedAr, ArgmaxBasisAndTrianglePlus) {
  const auto h = build_maxcut_hamiltonian(triangle());
  const auto ctx = make_ar_context(h, ProblemKind::MaxCut);
  EXPECT_EQ(expected_ar(StateVector::basis(3, ctx.extremes.argmax), h, ctx), 1.0);
  EXPECT_NEAR(expected_ar(prepare_plus_state(3), h, ctx), 0.75, 1e-15);
}

TEST(ExpectedAr, DickeStateIsFeasibleAverage) {
  std::mt19937_64 rng(2);
  for (int n = 3; n <= 8; ++n) {
    const auto po = oracle::random_portfolio(n, rng);
    const auto h = build_po_hamiltonian(po);
    const auto ctx = make_ar_context(po, h);
    double lo = 1e300;
    double hi = -1e300;
    for (std::uint64_t x = 0; x < h.dimension(); ++x) {
      if (__builtin_popcountll(x) != po.budget) continue;
      lo = std::min(lo, oracle::po_value(po, x));
      hi = std::max(hi, oracle::po_value(po, x));
    }
    double sum = 0.0;
    int count = 0;
    for (std::uint64_t x = 0; x < h.dimension(); ++x) {
      if (__builtin_popcountll(x) != po.budget) continue;
      sum += (oracle::po_value(po, x) - hi) / (lo - hi);
      ++count;
    }
    EXPECT_NEAR(expected_ar(prepare_dicke_state(n, po.budget), h, ctx), sum / count, 1e-12);
  }
}

TEST(ExpectedAr, PortfolioQaoaHasNoLeakageContribution) {
  std::mt19937_64 rng(3);
  const auto po = oracle::random_portfolio(6, rng);
  const auto h = build_po_hamiltonian(po);
  const auto ctx = make_ar_context(po, h);
  const auto s = run_qaoa(po, {{0.4, -0.2}, {0.3, 0.7}}, XYRing{2});
  double restricted = 0.0;
  for (std::size_t x = 0; x < s.size(); ++x) {
    if (hamming_weight(x) == po.budget) {
      restricted += std::norm(s[x]) * approximation_ratio(h.energies[x], po.budget, ctx);
    }
  }
  EXPECT_NEAR(expected_ar(s, h, ctx), restricted, 1e-9);
}

TEST(SampleMeanAr, IdenticalSamplesAndExtremes) {
  const auto h = build_maxcut_hamiltonian(triangle());
  const auto ctx = make_ar_context(h, ProblemKind::MaxCut);
  const std::vector<Bitstring> same(10, 0b011);
  EXPECT_EQ(sample_mean_ar(same, h, ctx).stderr_, 0.0);
  const std::vector<Bitstring> ends{ctx.extremes.argmax, ctx.extremes.argmin};
  EXPECT_DOUBLE_EQ(sample_mean_ar(ends, h, ctx).mean, 0.5);
  EXPECT_THROW(sample_mean_ar(std::vector<Bitstring>{}, h, ctx), ArgumentError);
}

TEST(SampleMeanAr, ConvergesToExpectedAr) {
  std::mt19937_64 rng(4);
  const ProblemInstance g = oracle::random_graph(6, 0.6, rng);
  const auto h = build_hamiltonian(g);
  const auto ctx = make_ar_context(h, ProblemKind::MaxCut);
  const auto s = run_qaoa(g, {{0.5}, {0.3}}, TransverseX{});
  const auto m = sample_mean_ar(sample_bitstrings(s, 10000, 5), h, ctx);
  EXPECT_NEAR(m.mean, expected_ar(s, h, ctx), 5.0 * m.stderr_);
}

TEST(RelativeImprovement, Examples) {
  EXPECT_EQ(relative_ar_improvement(0.8, 0.8, 0.9), 0.0);
  EXPECT_EQ(relative_ar_improvement(0.9, 0.8, 0.9), 1.0);
  EXPECT_NEAR(relative_ar_improvement(0.85, 0.8, 0.9), 0.5, 1e-12);
  EXPECT_LT(relative_ar_improvement(0.7, 0.8, 0.9), 0.0);
  EXPECT_THROW(relative_ar_improvement(0.5, 0.8, 0.8 + 1e-13), DegenerateError);
}

TEST(MeanAndStderr, SampleStdOverRootN) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto m = mean_and_stderr(v);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.stderr_, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
}
