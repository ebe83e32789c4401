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

#include <algorithm>

#include <numbers>
#include <random>

#include "qaoa/error.hpp"
#include "qaoa/protocol.hpp"
#include "qaoa/seeding.hpp"

using namespace qaoa;

namespace {

const FixedParameterTable& table() {
  static const FixedParameterTable t = FixedParameterTable::builtin();
  return t;
}

ProtocolConfig config_with(Backend backend, int extra, std::uint64_t seed = 1) {
  ProtocolConfig c;
  c.backend = backend;
  c.extra_evals = extra;
  c.seed = seed;
  return c;
}

double p1_maxcut_value(const DiagonalHamiltonian& h, const QaoaCircuit& c, double g, double b) {
  return expectation_energy(run_qaoa(c, {{g}, {b}}), h);
}

}  // namespace

TEST(FixedParameters, EntriesForAllDepths) {
  for (auto family : {ProblemFamily::MaxCut3Regular, ProblemFamily::SKModelForPO}) {
    for (int p = 1; p <= 7; ++p) {
      const auto params = initial_parameters(family, p, table());
      EXPECT_EQ(params.depth(), p);
      EXPECT_EQ(params.beta.size(), static_cast<std::size_t>(p));
    }
  }
  try {
    initial_parameters(ProblemFamily::MaxCut3Regular, 9, table());
    FAIL() << "expected MissingEntryError";
  } catch (const MissingEntryError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("MaxCut3Regular"), std::string::npos);
    EXPECT_NE(msg.find("p=9"), std::string::npos);
  }
}

TEST(FixedParameters, DataFileMatchesBuiltin) {
  const auto loaded = FixedParameterTable::load(std::string(QAOA_DATA_DIR) + "/fixed_parameters.json");
  EXPECT_EQ(loaded, table());
  EXPECT_EQ(FixedParameterTable::from_json(table().to_json()), table());
}

TEST(FixedParameters, SchemaErrors) {
  nlohmann::json j = table().to_json();
  j["families"]["MaxCut3Regular"]["2"]["gamma"] = {0.1};
  EXPECT_THROW(FixedParameterTable::from_json(j), SchemaError);
  j = table().to_json();
  j["families"]["Unknown"] = nlohmann::json::object();
  EXPECT_THROW(FixedParameterTable::from_json(j), SchemaError);
  EXPECT_THROW(FixedParameterTable::from_json(nlohmann::json::object()), SchemaError);
}

TEST(FixedParameters, MaxCutDepthOneMatchesGridOptimum) {
  // Exact p=1 landscape of unweighted 3-regular graphs, searched on a coarse
  // grid and refined locally.
  const int instances = 20;
  double gamma_sum = 0.0;
  double beta_sum = 0.0;
  for (int k = 0; k < instances; ++k) {
    const auto g = generate_regular_graph(12, 3, 1000 + k);
    const auto c = make_circuit(g);
    const auto& h = c.hamiltonian;
    double best = -1e300;
    double bg = 0.0;
    double bb = 0.0;
    auto consider = [&](double gg, double be) {
      const double v = p1_maxcut_value(h, c, gg, be);
      if (v > best) {
        best = v;
        bg = gg;
        bb = be;
      }
    };
    for (int i = 1; i < 32; ++i) {
      for (int j = 0; j < 16; ++j) consider(i * (std::numbers::pi / 2) / 32, j * (std::numbers::pi / 2) / 16);
    }
    const double cg = bg;
    const double cb = bb;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) consider(cg + 0.005 * i, cb + 0.005 * j);
    }
    gamma_sum += bg;
    beta_sum += bb;
  }
  const auto entry = initial_parameters(ProblemFamily::MaxCut3Regular, 1, table());
  EXPECT_NEAR(entry.gamma[0], gamma_sum / instances, 0.05);
  EXPECT_NEAR(entry.beta[0], beta_sum / instances, 0.05);
}

TEST(FixedParameters, TransferToPortfolio) {
  const QaoaParams sk{{0.5, 0.6}, {0.3, 0.2}};
  const auto mc = transfer_parameters(ProblemFamily::MaxCut3Regular, sk, 9);
  EXPECT_EQ(mc, sk);
  const auto po = transfer_parameters(ProblemFamily::SKModelForPO, sk, 9);
  EXPECT_DOUBLE_EQ(po.gamma[0], 0.5 / 3.0);
  EXPECT_DOUBLE_EQ(po.gamma[1], 0.6 / 3.0);
  EXPECT_EQ(po.beta[0], -0.3);
  EXPECT_EQ(po.beta[1], -0.2);
}

TEST(FixedParameters, TransferredAnglesBeatTheStartingState) {
  // At p=3 the transferred SK angles improve on the bare Dicke state, and the
  // sign convention beats the mirrored one at every depth.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto po = rescale_instance(generate_po_instance(8, seed)).instance;
    const auto c = make_circuit(po);
    const auto ctx = make_ar_context(po, c.hamiltonian);
    const double base = expected_ar(initial_state(c), c.hamiltonian, ctx);
    for (int p : {1, 3}) {
      const auto sk = initial_parameters(ProblemFamily::SKModelForPO, p, table());
      const auto params = transfer_parameters(ProblemFamily::SKModelForPO, sk, 8);
      auto mirrored = params;
      for (double& b : mirrored.beta) b = -b;
      const double ar = expected_ar(run_qaoa(c, params), c.hamiltonian, ctx);
      EXPECT_GT(ar, expected_ar(run_qaoa(c, mirrored), c.hamiltonian, ctx)) << seed << " p" << p;
      if (p == 3) EXPECT_GT(ar, base) << seed;
    }
  }
}

namespace {

double table_distance(const FixedParameterTable& t, ProblemFamily f, int p) {
  const auto& a = *t.find(f, p);
  const auto& b = *table().find(f, p);
  double d = 0.0;
  for (int i = 0; i < p; ++i) {
    d = std::max({d, std::abs(a.gamma[i] - b.gamma[i]), std::abs(a.beta[i] - b.beta[i])});
  }
  return d;
}

}  // namespace

TEST(FallbackTable, ReproducesPublishedConventions) {
  FallbackTableOptions o;
  o.max_p = 2;
  o.instances = 3;
  o.n = 8;
  o.seed = 4;
  o.evals_per_layer = 200;
  const auto mc = generate_fixed_parameter_table(ProblemFamily::MaxCut3Regular, o);
  for (int p = 1; p <= 2; ++p) {
    EXPECT_LT(table_distance(mc, ProblemFamily::MaxCut3Regular, p), 0.1) << p;
  }
  EXPECT_EQ(mc.find(ProblemFamily::MaxCut3Regular, 3), nullptr);

  // SK tables are infinite-size limits; finite instances approach them as n grows.
  const auto sk8 = generate_fixed_parameter_table(ProblemFamily::SKModelForPO, o);
  o.n = 12;
  const auto sk12 = generate_fixed_parameter_table(ProblemFamily::SKModelForPO, o);
  for (int p = 1; p <= 2; ++p) {
    EXPECT_LT(table_distance(sk12, ProblemFamily::SKModelForPO, p),
              table_distance(sk8, ProblemFamily::SKModelForPO, p))
        << p;
  }
  EXPECT_LT(table_distance(sk12, ProblemFamily::SKModelForPO, 1), 0.1);
}

TEST(ParamScaling, MaxAbsExamples) {
  const auto s = build_param_scaling({{0.5, 1.0}, {0.25, 0.125}});
  EXPECT_EQ(s.s_gamma, 1.0);
  EXPECT_EQ(s.s_beta, 0.25);
  const auto z = build_param_scaling({{0.5, -0.7}, {0.0, 0.0}});
  EXPECT_EQ(z.s_beta, 1.0);
  EXPECT_EQ(z.s_gamma, 0.7);
}

TEST(ParamScaling, RoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    const int p = 1 + t % 7;
    QaoaParams params;
    for (int k = 0; k < p; ++k) {
      params.gamma.push_back(u(rng));
      params.beta.push_back(u(rng));
    }
    const auto s = build_param_scaling(params);
    const auto back = s.to_params(s.to_optimizer(params));
    for (int k = 0; k < p; ++k) {
      EXPECT_NEAR(back.gamma[k], params.gamma[k], 1e-12);
      EXPECT_NEAR(back.beta[k], params.beta[k], 1e-12);
    }
  }
}

TEST(Protocol, ExactBackendReachesReference) {
  const ProblemInstance g = generate_maxcut_instance(8, 3);
  const auto r = run_protocol(g, 1, config_with(Backend::ExactSim, 200), table());
  EXPECT_NEAR(r.ar_final, r.ar_opt, 1e-3);
  ASSERT_TRUE(r.relative_improvement.has_value());
  EXPECT_GE(*r.relative_improvement, 0.0);
}

TEST(Protocol, SampledBudgetAtDepthFive) {
  const ProblemInstance g = generate_maxcut_instance(10, 5);
  const auto r = run_protocol(g, 5, config_with(Backend::SampledSim, 2), table());
  EXPECT_LE(r.trace.records.size(), 13u);
  EXPECT_LE(r.trace.shots_used(), 10000);
  EXPECT_EQ(r.plan.shots_per_eval, 769);
  for (const auto& rec : r.trace.records) EXPECT_EQ(rec.shots, 769);
}

TEST(Protocol, PortfolioSamplesAreFeasible) {
  const ProblemInstance po = generate_po_instance(8, 2);
  const auto prepared = prepare_instance(po, 2, table());
  const auto r = run_protocol(prepared, config_with(Backend::SampledSim, 4));
  const QaoaObjective objective(prepared.circuit, 2, prepared.scaling, 1.0,
                                QaoaObjective::Mode::Sampled);
  for (std::size_t k = 0; k < r.trace.records.size(); ++k) {
    const auto& rec = r.trace.records[k];
    for (Bitstring x : objective.sample(rec.point, rec.shots, derive_seed(1, {k}))) {
      EXPECT_EQ(hamming_weight(x), 4);
    }
  }
}

TEST(Protocol, SampledObjectiveMatchesRecordedValues) {
  const ProblemInstance g = generate_maxcut_instance(8, 6);
  const auto prepared = prepare_instance(g, 2, table());
  const auto r = run_protocol(prepared, config_with(Backend::SampledSim, 3, 21));
  const QaoaObjective objective(prepared.circuit, 2, prepared.scaling, -1.0,
                                QaoaObjective::Mode::Sampled);
  for (std::size_t k = 0; k < r.trace.records.size(); ++k) {
    const auto& rec = r.trace.records[k];
    EXPECT_EQ(objective.evaluate(rec.point, rec.shots, derive_seed(21, {k})), rec.value);
  }
}

TEST(Protocol, DeterministicAndRecomputable) {
  const ProblemInstance g = generate_maxcut_instance(10, 8);
  const auto a = run_protocol(g, 3, config_with(Backend::SampledSim, 5, 9), table());
  const auto b = run_protocol(g, 3, config_with(Backend::SampledSim, 5, 9), table());
  EXPECT_EQ(result_to_json(a).dump(), result_to_json(b).dump());
  ASSERT_TRUE(a.relative_improvement.has_value());
  EXPECT_EQ(*a.relative_improvement, relative_ar_improvement(a.ar_final, a.ar_ini, a.ar_opt));
  const auto c = run_protocol(g, 3, config_with(Backend::SampledSim, 5, 10), table());
  EXPECT_NE(result_to_json(a).dump(), result_to_json(c).dump());
}

TEST(Protocol, RescalingTransparency) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const ProblemInstance inst = seed % 2 ? ProblemInstance(generate_po_instance(6, seed))
                                          : ProblemInstance(generate_maxcut_instance(8, seed));
    const ProblemInstance pre = rescale_instance(inst).instance;
    const auto a = run_protocol(inst, 2, config_with(Backend::SampledSim, 4, seed), table());
    const auto b = run_protocol(pre, 2, config_with(Backend::SampledSim, 4, seed), table());
    ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
    for (std::size_t k = 0; k < a.trace.records.size(); ++k) {
      EXPECT_EQ(a.trace.records[k].point, b.trace.records[k].point);
      EXPECT_EQ(a.trace.records[k].value, b.trace.records[k].value);
    }
    EXPECT_EQ(a.ar_final, b.ar_final);
    EXPECT_EQ(b.divisor, 1.0);
  }
}

TEST(Protocol, ReportsExactArs) {
  const ProblemInstance po = generate_po_instance(8, 11);
  const auto prepared = prepare_instance(po, 2, table());
  const auto r = run_protocol(prepared, config_with(Backend::SampledSim, 2));
  EXPECT_EQ(r.ar_final, exact_ar(prepared, r.final_params));
  EXPECT_EQ(r.ar_ini, exact_ar(prepared, r.initial_params));
  EXPECT_EQ(r.ar_opt, exact_ar(prepared, r.reference_params));
  EXPECT_EQ(r.final_params, prepared.scaling.to_params(r.trace.best_point));
}

TEST(Protocol, DefaultsPerFamily) {
  const auto mc = run_protocol(generate_maxcut_instance(6, 1), 1, ProtocolConfig{}, table());
  EXPECT_EQ(*mc.config.rhobeg, 0.1);
  EXPECT_EQ(mc.config.total_shots, 10000);
  EXPECT_EQ(mc.config.extra_evals, 2);
  const auto po = run_protocol(generate_po_instance(6, 1), 1, ProtocolConfig{}, table());
  EXPECT_EQ(*po.config.rhobeg, 0.5);
  // Phase-one steps are rhobeg in optimizer coordinates.
  EXPECT_DOUBLE_EQ(po.trace.records[1].point[0] - po.trace.records[0].point[0], 0.5);
}

TEST(Protocol, InfeasibleBudget) {
  ProtocolConfig c;
  c.total_shots = 5;
  EXPECT_THROW(run_protocol(generate_maxcut_instance(6, 1), 2, c, table()), InfeasibleBudgetError);
}

TEST(Protocol, DegenerateWhenInitialIsOptimal) {
  // One edge: p=1 reaches AR 1 at gamma = pi/2, beta = pi/8.
  FixedParameterTable t;
  t.set(ProblemFamily::MaxCut3Regular, {{std::numbers::pi / 2}, {std::numbers::pi / 8}});
  const ProblemInstance edge = MaxCutInstance{2, {{0, 1, 1.0}}};
  const auto r = run_protocol(edge, 1, config_with(Backend::SampledSim, 2), t);
  EXPECT_NEAR(r.ar_ini, 1.0, 1e-12);
  EXPECT_TRUE(r.degenerate());
  EXPECT_FALSE(r.relative_improvement.has_value());
}

TEST(Protocol, LandscapeBackend) {
  const ProblemInstance g = generate_maxcut_instance(8, 12);
  ProtocolConfig c = config_with(Backend::LandscapeOracle, 10);
  c.landscape_resolution = 32;
  const auto r = run_protocol(g, 1, c, table());
  EXPECT_EQ(r.trace.records.size(), 13u);
  EXPECT_GE(r.clamp_events, 0);
  EXPECT_LE(r.trace.best_value, r.trace.records.front().value);
}

TEST(Protocol, AlternativeOptimizers) {
  const ProblemInstance g = generate_maxcut_instance(8, 13);
  for (auto opt : {OptimizerKind::NelderMead, OptimizerKind::Spsa}) {
    ProtocolConfig c = config_with(Backend::SampledSim, 10);
    c.optimizer = opt;
    const auto r = run_protocol(g, 2, c, table());
    EXPECT_LE(static_cast<int>(r.trace.records.size()), 15);
    EXPECT_LE(r.trace.shots_used(), 10000);
  }
}

TEST(Reference, SingleEdgeIsSolvedAtDepthOne) {
  const auto ref = optimize_reference(MaxCutInstance{2, {{0, 1, 1.0}}}, 1, table());
  EXPECT_NEAR(ref.ar_opt, 1.0, 1e-6);
}

TEST(Reference, NeverWorseThanInitialPoint) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const ProblemInstance inst = seed % 2 ? ProblemInstance(generate_po_instance(6, seed))
                                          : ProblemInstance(generate_maxcut_instance(8, seed));
    const auto prep = prepare_instance(inst, 1 + seed % 3, table());
    EXPECT_GE(prep.reference.ar_opt, prep.ar_ini);
    EXPECT_LE(prep.reference.evaluations, 500 * prep.p);
  }
}

TEST(Reference, OptimalStartIsKept) {
  const ProblemInstance g = generate_maxcut_instance(6, 2);
  const auto first = optimize_reference(g, 1, table());
  FixedParameterTable t;
  t.set(ProblemFamily::MaxCut3Regular, first.params);
  const auto prep = prepare_instance(g, 1, t);
  EXPECT_NEAR(prep.reference.ar_opt, prep.ar_ini, 1e-9);
  EXPECT_NEAR(prep.reference.params.gamma[0], first.params.gamma[0], 1e-4);
  EXPECT_NEAR(prep.reference.params.beta[0], first.params.beta[0], 1e-4);
}

TEST(Reference, MultistartIsNoWorse) {
  const ProblemInstance g = generate_maxcut_instance(8, 14);
  ReferenceOptions o;
  o.extra_starts = 3;
  o.seed = 5;
  EXPECT_GE(optimize_reference(g, 2, table(), o).ar_opt, optimize_reference(g, 2, table()).ar_opt);
}

TEST(ResultJson, RoundTrip) {
  const ProblemInstance g = generate_maxcut_instance(8, 15);
  const auto r = run_protocol(g, 2, config_with(Backend::SampledSim, 3), table());
  const auto j = result_to_json(r);
  EXPECT_EQ(j.at("version"), "0.1.0");
  const auto back = result_from_json(j);
  EXPECT_EQ(result_to_json(back), j);
  EXPECT_THROW(result_from_json(nlohmann::json::object()), SchemaError);
}
