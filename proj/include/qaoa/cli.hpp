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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qaoa/protocol.hpp"

namespace qaoa::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitInfeasibleBudget = 3,
  kExitDegenerate = 4,
  kExitIo = 5,
};

struct GenerateOptions {
  std::string kind = "maxcut";  // maxcut, po, sk
  int n = 12;
  int count = 1;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
  std::optional<int> budget;  // po only; defaults to n / 2
};

/// Instance `index` of a generation request; seeded by derive_seed(seed, {index}).
ProblemInstance generate_instance(const GenerateOptions& options, int index);

/// Writes `count` instances named {kind}_{n}_{seed}_{i}.json and returns the paths.
std::vector<std::filesystem::path> cmd_generate(const GenerateOptions& options);

struct ProtocolCommand {
  std::filesystem::path instance;
  int p = 1;
  ProtocolConfig config;
  std::optional<std::filesystem::path> table;
};

ProtocolResult cmd_protocol(const ProtocolCommand& command);

struct LandscapeCommand {
  std::filesystem::path instance;
  int p = 1;
  int resolution = kDefaultResolution;
  double box = kDefaultBoxWidth;
  int trotter_reps = 1;
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> overlay;  // protocol result record
  std::optional<std::filesystem::path> table;
};

struct LandscapeOutputs {
  std::filesystem::path grid;
  std::filesystem::path csv;
  std::optional<std::filesystem::path> overlay_csv;
};

LandscapeOutputs cmd_landscape(const LandscapeCommand& command);

/// Optimizer queries of a protocol record as ordered rows in raw parameters.
void write_overlay_csv(const ProtocolResult& result, std::ostream& out);

// ---------------------------------------------------------------------------
// Benchmark sweeps

struct BenchCell {
  std::string id;
  int p = 1;
  OptimizerKind optimizer = OptimizerKind::LinearTrustRegion;
  std::optional<double> rhobeg;
  int extra_evals = 2;
  long total_shots = 10000;
};

struct BenchManifest {
  std::vector<std::filesystem::path> instance_files;
  /// Generated instances, used when instance_files is empty.
  std::optional<GenerateOptions> generate;
  std::vector<int> p{1};
  std::vector<OptimizerKind> optimizers{OptimizerKind::LinearTrustRegion};
  std::vector<std::optional<double>> rhobeg{std::nullopt};
  std::vector<int> extra_evals{2};
  /// Exactly one of total_shots / shots_per_eval drives the budget axis.
  std::vector<long> total_shots{10000};
  std::vector<long> shots_per_eval;
  Backend backend = Backend::SampledSim;
  int landscape_resolution = kDefaultResolution;
  int trotter_reps = 1;
  int repetitions = 1;
  std::uint64_t master_seed = 0;

  static BenchManifest from_json(const nlohmann::json& j, const std::filesystem::path& base);
  static BenchManifest load(const std::filesystem::path& path);
  std::vector<BenchCell> cells() const;
};

struct BenchRun {
  std::string cell;
  int p = 1;
  std::string optimizer;
  std::optional<double> rhobeg;
  long total_shots = 0;
  int extra_evals = 0;
  int instance = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::optional<double> relative_improvement;  // empty for degenerate instances
  double ar_ini = 0.0;
  double ar_final = 0.0;
  double ar_opt = 0.0;
  long shots_used = 0;
  int evaluations = 0;
  long shots_per_eval = 0;
  double wall_seconds = 0.0;

  nlohmann::json to_json() const;
  static BenchRun from_json(const nlohmann::json& j);
};

struct BenchRow {
  std::string config_id;
  int p = 1;
  std::string optimizer;
  std::optional<double> rhobeg;
  long total_shots = 0;
  int extra_evals = 0;
  long shots_per_eval = 0;
  int instance_count = 0;  // runs in the cell, one per (instance, repetition)
  int skipped = 0;
  double mean_improvement = 0.0;
  double standard_error = 0.0;
  double mean_shots_used = 0.0;
  double wall_seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

/// Seed of one run: derive_seed(master, {hash(cell id), instance, rep}).
std::uint64_t run_seed(std::uint64_t master_seed, const std::string& cell_id, int instance,
                       int rep);

struct BenchOptions {
  std::filesystem::path out_dir = ".";
  int workers = 1;
  bool record_timing = false;
};

/// Streams runs to out_dir/runs.jsonl, skipping cells already complete there,
/// then writes report.csv and contour.csv.
BenchReport cmd_bench(const std::filesystem::path& manifest, const BenchOptions& options);
BenchReport cmd_bench(const BenchManifest& manifest, const BenchOptions& options);

std::vector<BenchRun> read_runs(const std::filesystem::path& jsonl);
/// Aggregates runs per cell, rows sorted by cell id. Wall time is reported
/// only when record_timing is set so that reports are reproducible.
BenchReport aggregate_runs(const std::vector<BenchRun>& runs, bool record_timing);
void write_report_csv(const BenchReport& report, std::ostream& out);
void write_contour_csv(const BenchReport& report, std::ostream& out);

/// Entry point used by the executable. Returns a process exit code.
int run(int argc, char** argv);

}  // namespace qaoa::cli
