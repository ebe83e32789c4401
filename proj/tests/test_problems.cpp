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

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "qaoa/error.hpp"
#include "qaoa/instance_io.hpp"
#include "qaoa/problems.hpp"

using namespace qaoa;

namespace {

MaxCutInstance triangle() { return {3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}}; }

PortfolioInstance two_assets() {
  PortfolioInstance po;
  po.n = 2;
  po.mu = {1.0, 2.0};
  po.sigma = {1.0, 0.0, 0.0, 1.0};
  po.q = 1.0;
  po.budget = 1;
  return po;
}

std::vector<int> degrees(const MaxCutInstance& g) {
  std::vector<int> d(g.n, 0);
  for (const auto& e : g.edges) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "qaoa_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(MaxCutHamiltonian, TriangleValues) {
  const auto h = build_maxcut_hamiltonian(triangle());
  EXPECT_EQ(h.energies[0b000], 0.0);
  EXPECT_EQ(h.energies[0b001], 2.0);
  EXPECT_EQ(h.energies.size(), 8u);
}

TEST(MaxCutHamiltonian, SingleWeightedEdge) {
  const auto h = build_maxcut_hamiltonian({2, {{0, 1, 3.5}}});
  EXPECT_EQ(h.energies[0b01], 3.5);
  EXPECT_EQ(h.energies[0b10], 3.5);
  EXPECT_EQ(h.energies[0b11], 0.0);
}

TEST(MaxCutHamiltonian, LittleEndianBitOrder) {
  // Only vertex 2 differs from the rest: x = 0b100.
  const MaxCutInstance g{3, {{1, 2, 1.0}}};
  const auto h = build_maxcut_hamiltonian(g);
  EXPECT_EQ(h.energies[0b100], 1.0);
  EXPECT_EQ(h.energies[0b001], 0.0);
}

TEST(MaxCutHamiltonian, GlobalFlipSymmetryAndOracle) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto g = oracle::random_graph(3 + t % 6, 0.6, rng);
    const auto h = build_maxcut_hamiltonian(g);
    const Bitstring mask = (Bitstring{1} << g.n) - 1;
    for (Bitstring x = 0; x < h.dimension(); ++x) {
      EXPECT_NEAR(h.energies[x], h.energies[~x & mask], 1e-12);
      EXPECT_NEAR(h.energies[x], oracle::cut_value(g, x), 1e-12);
    }
  }
}

TEST(MaxCutHamiltonian, CapacityError) {
  MaxCutInstance g{26, {{0, 1, 1.0}}};
  EXPECT_THROW(build_maxcut_hamiltonian(g), CapacityError);
  EXPECT_THROW(build_maxcut_hamiltonian({6, {{0, 1, 1.0}}}, 4), CapacityError);
}

TEST(MaxCutInstanceValidation, RejectsBadEdges) {
  EXPECT_THROW((MaxCutInstance{3, {{0, 0, 1.0}}}.validate()), ArgumentError);
  EXPECT_THROW((MaxCutInstance{3, {{0, 3, 1.0}}}.validate()), ArgumentError);
  EXPECT_THROW((MaxCutInstance{3, {{0, 1, 1.0}, {1, 0, 2.0}}}.validate()), ArgumentError);
  EXPECT_THROW((MaxCutInstance{1, {}}.validate()), ArgumentError);
}

TEST(PortfolioHamiltonian, DirectFormulaExamples) {
  const auto h = build_po_hamiltonian(two_assets());
  EXPECT_EQ(h.energies[0b00], 0.0);
  EXPECT_DOUBLE_EQ(h.energies[0b01], 0.0);
  EXPECT_DOUBLE_EQ(h.energies[0b10], -1.0);
  EXPECT_DOUBLE_EQ(h.energies[0b11], -1.0);
}

TEST(PortfolioHamiltonian, MatchesIsingFormAndOracle) {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 8; ++n) {
    const auto po = oracle::random_portfolio(n, rng);
    const auto h = build_po_hamiltonian(po);
    const auto ising = portfolio_ising_form(po);
    for (Bitstring x = 0; x < h.dimension(); ++x) {
      EXPECT_NEAR(h.energies[x], ising.evaluate(x), 1e-9);
      EXPECT_NEAR(h.energies[x], oracle::po_value(po, x), 1e-9);
    }
  }
}

TEST(PortfolioInstanceValidation, Rejects) {
  auto po = two_assets();
  po.budget = 2;
  EXPECT_THROW(po.validate(), ArgumentError);
  po = two_assets();
  po.sigma[1] = 0.5;
  EXPECT_THROW(po.validate(), ArgumentError);
}

TEST(Rescale, UnitRegularGraphUnchanged) {
  auto g = generate_regular_graph(12, 3, 3);
  const auto r = rescale_instance(g);
  EXPECT_EQ(r.divisor, 1.0);
  const auto& out = std::get<MaxCutInstance>(r.instance);
  for (std::size_t k = 0; k < g.edges.size(); ++k) EXPECT_EQ(out.edges[k].w, g.edges[k].w);
}

TEST(Rescale, SingleEdgeWeightTwo) {
  const auto r = rescale_instance(MaxCutInstance{2, {{0, 1, 2.0}}});
  EXPECT_DOUBLE_EQ(r.divisor, 2.0);
  EXPECT_DOUBLE_EQ(std::get<MaxCutInstance>(r.instance).edges[0].w, 1.0);
}

TEST(Rescale, MixtureGraphDivisorMatchesDirectSum) {
  const auto g = generate_maxcut_instance(12, 7);
  double s = 0.0;
  for (const auto& e : g.edges) s += e.w * e.w;
  EXPECT_NEAR(rescale_divisor(g), std::sqrt(s / g.edges.size()), 1e-12);
}

TEST(Rescale, PortfolioDivisorMatchesIsingCoefficients) {
  std::mt19937_64 rng(2);
  const auto po = oracle::random_portfolio(6, rng);
  // Coefficients written out independently: ZZ_ij = q S_ij / 2 (i<j),
  // Z_i = -(q sum_j S_ij - mu_i) / 2.
  double quad = 0.0;
  int nq = 0;
  double lin = 0.0;
  int nl = 0;
  for (int i = 0; i < po.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < po.n; ++j) row += po.cov(i, j);
    const double zi = -0.5 * (po.q * row - po.mu[i]);
    if (zi != 0.0) {
      lin += zi * zi;
      ++nl;
    }
    for (int j = i + 1; j < po.n; ++j) {
      const double zz = po.q * po.cov(i, j) / 2.0;
      if (zz != 0.0) {
        quad += zz * zz;
        ++nq;
      }
    }
  }
  EXPECT_NEAR(rescale_divisor(po), std::sqrt(quad / nq + lin / nl), 1e-12);
}

TEST(Rescale, IdempotentAndPreservesOptima) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    ProblemInstance inst = t % 2 ? ProblemInstance(oracle::random_portfolio(6, rng))
                                 : ProblemInstance(generate_maxcut_instance(8, t));
    const auto once = rescale_instance(inst);
    const auto twice = rescale_instance(once.instance);
    EXPECT_NEAR(twice.divisor, 1.0, 1e-12);
    const auto h0 = build_hamiltonian(inst);
    const auto h1 = build_hamiltonian(once.instance);
    const auto h2 = build_hamiltonian(twice.instance);
    for (std::size_t x = 0; x < h1.dimension(); ++x) {
      EXPECT_NEAR(h1.energies[x], h2.energies[x], 1e-12);
      EXPECT_NEAR(h0.energies[x] / once.divisor, h1.energies[x], 1e-9);
    }
    const auto w = feasible_weight(inst);
    const auto e0 = spectrum_extremes(h0, w);
    const auto e1 = spectrum_extremes(h1, w);
    EXPECT_EQ(e0.argmin, e1.argmin);
    EXPECT_EQ(e0.argmax, e1.argmax);
  }
}

TEST(Rescale, ZeroObjectiveIsDegenerate) {
  EXPECT_THROW(rescale_instance(MaxCutInstance{2, {{0, 1, 0.0}}}), DegenerateError);
}

TEST(Spectrum, TriangleAndPortfolio) {
  const auto e = spectrum_extremes(build_maxcut_hamiltonian(triangle()));
  EXPECT_EQ(e.f_min, 0.0);
  EXPECT_EQ(e.f_max, 2.0);
  EXPECT_EQ(e.argmin, 0u);
  EXPECT_EQ(e.argmax, 0b001u);  // smallest index among ties

  const auto p = spectrum_extremes(build_po_hamiltonian(two_assets()), 1);
  EXPECT_DOUBLE_EQ(p.f_min, -1.0);
  EXPECT_EQ(p.argmin, 0b10u);
  EXPECT_DOUBLE_EQ(p.f_max, 0.0);
  EXPECT_EQ(p.argmax, 0b01u);
  EXPECT_TRUE(p.feasible_only);
}

TEST(Spectrum, MatchesSeparateEnumeration) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    const auto g = oracle::random_graph(10, 0.5, rng);
    const auto e = spectrum_extremes(build_maxcut_hamiltonian(g));
    double lo = 1e300;
    double hi = -1e300;
    for (std::uint64_t x = 0; x < 1024; ++x) {
      lo = std::min(lo, oracle::cut_value(g, x));
      hi = std::max(hi, oracle::cut_value(g, x));
    }
    EXPECT_NEAR(e.f_min, lo, 1e-12);
    EXPECT_NEAR(e.f_max, hi, 1e-12);
  }
}

TEST(Spectrum, FeasibleOnlyRespectsWeight) {
  std::mt19937_64 rng(8);
  for (int n = 3; n <= 9; ++n) {
    auto po = oracle::random_portfolio(n, rng);
    for (int k = 1; k < n; ++k) {
      const auto e = spectrum_extremes(build_po_hamiltonian(po), k);
      EXPECT_EQ(hamming_weight(e.argmin), k);
      EXPECT_EQ(hamming_weight(e.argmax), k);
      EXPECT_LE(e.f_min, e.f_max);
    }
  }
}

TEST(Generators, FourVerticesIsK4) {
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    const auto g = generate_maxcut_instance(4, seed);
    EXPECT_EQ(g.edges.size(), 6u);
    for (int d : degrees(g)) EXPECT_EQ(d, 3);
  }
}

TEST(Generators, TwelveVerticesThreeRegular) {
  const auto g = generate_maxcut_instance(12, 7);
  EXPECT_EQ(g.edges.size(), 18u);
  for (int d : degrees(g)) EXPECT_EQ(d, 3);
  EXPECT_NO_THROW(g.validate());
}

TEST(Generators, Deterministic) {
  const auto a = generate_maxcut_instance(10, 42);
  const auto b = generate_maxcut_instance(10, 42);
  ASSERT_EQ(a.edges.size(), b.edges.size());
  for (std::size_t k = 0; k < a.edges.size(); ++k) {
    EXPECT_EQ(a.edges[k].u, b.edges[k].u);
    EXPECT_EQ(a.edges[k].v, b.edges[k].v);
    EXPECT_EQ(a.edges[k].w, b.edges[k].w);
  }
}

TEST(Generators, RejectsOddOrTinyN) {
  EXPECT_THROW(generate_maxcut_instance(7, 0), ArgumentError);
  EXPECT_THROW(generate_maxcut_instance(2, 0), ArgumentError);
}

TEST(Generators, MixtureWeightMean) {
  std::vector<double> w;
  for (std::uint64_t seed = 0; w.size() < 10000; ++seed) {
    for (const auto& e : generate_maxcut_instance(100, seed).edges) w.push_back(e.w);
  }
  w.resize(10000);
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= w.size();
  double var = 0.0;
  for (double v : w) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (w.size() - 1) / w.size());
  EXPECT_NEAR(mean, 3.5, 3.0 * se);
}

TEST(Generators, PortfolioCovariancePositiveDefinite) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto po = generate_po_instance(10, seed);
    EXPECT_EQ(po.budget, 5);
    EXPECT_EQ(po.q, 0.5);
    Eigen::MatrixXd s(po.n, po.n);
    for (int i = 0; i < po.n; ++i) {
      for (int j = 0; j < po.n; ++j) {
        s(i, j) = po.cov(i, j);
        EXPECT_NEAR(po.cov(i, j), po.cov(j, i), 1e-12);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(CsvLoader, ConstantColumnsHaveZeroVariance) {
  const auto path = temp_path("const.csv");
  {
    std::ofstream out(path);
    out << "A,B,C\n0.01,0.5,0.02\n-0.02,0.5,0.01\n0.03,0.5,0.00\n";
  }
  const auto po = load_po_from_csv(path, 3, 1, 0.5);
  EXPECT_EQ(po.cov(1, 1), 0.0);
  EXPECT_EQ(po.cov(0, 1), 0.0);
  EXPECT_GT(po.cov(0, 0), 0.0);
}

TEST(CsvLoader, MatchesDirectMeanAndCovariance) {
  std::mt19937_64 rng(28);
  std::normal_distribution<double> z(0.001, 0.02);
  std::vector<std::vector<double>> rows(28, std::vector<double>(10));
  const auto path = temp_path("returns.csv");
  {
    std::ofstream out(path);
    out.precision(17);
    for (int i = 0; i < 10; ++i) out << (i ? "," : "") << "asset" << i;
    out << '\n';
    for (auto& r : rows) {
      for (int i = 0; i < 10; ++i) {
        r[i] = z(rng);
        out << (i ? "," : "") << r[i];
      }
      out << '\n';
    }
  }
  const auto po = load_po_from_csv(path, 10, 5, 0.5);
  for (int i = 0; i < 10; ++i) {
    double m = 0.0;
    for (const auto& r : rows) m += r[i];
    m /= 28.0;
    EXPECT_NEAR(po.mu[i], m, 1e-15);
    for (int j = 0; j < 10; ++j) {
      double mj = 0.0;
      for (const auto& r : rows) mj += r[j];
      mj /= 28.0;
      double c = 0.0;
      for (const auto& r : rows) c += (r[i] - m) * (r[j] - mj);
      EXPECT_NEAR(po.cov(i, j), c / 27.0, 1e-15);
    }
  }
}

TEST(CsvLoader, ParseErrorNamesLocation) {
  const auto path = temp_path("bad.csv");
  {
    std::ofstream out(path);
    out << "A,B\n0.1,0.2\n0.3,abc\n";
  }
  try {
    load_po_from_csv(path, 2, 1, 0.5);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
  }
}

TEST(CsvLoader, TooFewRows) {
  const auto path = temp_path("short.csv");
  {
    std::ofstream out(path);
    out << "A,B\n0.1,0.2\n";
  }
  EXPECT_THROW(load_po_from_csv(path, 2, 1, 0.5), ArgumentError);
}

TEST(InstanceJson, RoundTrip) {
  const ProblemInstance g = generate_maxcut_instance(8, 1);
  const ProblemInstance p = generate_po_instance(6, 2);
  for (const auto& inst : {g, p}) {
    const auto path = temp_path("inst.json");
    write_instance(inst, path);
    const auto back = read_instance(path);
    const auto h0 = build_hamiltonian(inst);
    const auto h1 = build_hamiltonian(back);
    EXPECT_EQ(h0.energies, h1.energies);
    EXPECT_EQ(instance_to_json(inst), instance_to_json(back));
  }
}

TEST(InstanceJson, SchemaErrors) {
  EXPECT_THROW(instance_from_json(nlohmann::json{{"type", "graph"}}), SchemaError);
  EXPECT_THROW(instance_from_json(nlohmann::json{{"type", "maxcut"}, {"n", 3}}), SchemaError);
  EXPECT_THROW(read_instance("/nonexistent/instance.json"), IoError);
}
