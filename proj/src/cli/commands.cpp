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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qaoa/cli.hpp"
#include "qaoa/error.hpp"
#include "qaoa/instance_io.hpp"
#include "qaoa/parallel.hpp"
#include "qaoa/seeding.hpp"

namespace qaoa::cli {

namespace fs = std::filesystem;

namespace {

FixedParameterTable load_table(const std::optional<fs::path>& path) {
  return path ? FixedParameterTable::load(*path) : FixedParameterTable::builtin();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void param_header(int p, std::ostream& out) {
  if (p == 1) {
    out << "gamma,beta";
    return;
  }
  for (int k = 0; k < p; ++k) out << (k ? "," : "") << "gamma_" << k;
  for (int k = 0; k < p; ++k) out << ",beta_" << k;
}

}  // namespace

ProblemInstance generate_instance(const GenerateOptions& o, int index) {
  const std::uint64_t s = derive_seed(o.seed, {static_cast<std::uint64_t>(index)});
  if (o.kind == "maxcut") return generate_maxcut_instance(o.n, s);
  if (o.kind == "sk") return generate_sk_instance(o.n, s);
  if (o.kind == "po") {
    PortfolioInstance po = generate_po_instance(o.n, s);
    if (o.budget) {
      po.budget = *o.budget;
      po.validate();
    }
    return po;
  }
  throw ArgumentError("unknown kind '" + o.kind + "' (maxcut, po, sk)");
}

std::vector<fs::path> cmd_generate(const GenerateOptions& o) {
  if (o.count < 1) throw ArgumentError("--count must be at least 1");
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw IoError("cannot create " + o.out_dir.string() + ": " + ec.message());
  std::vector<fs::path> paths;
  for (int i = 0; i < o.count; ++i) {
    const ProblemInstance inst = generate_instance(o, i);
    const fs::path path = o.out_dir / (o.kind + "_" + std::to_string(o.n) + "_" +
                                       std::to_string(o.seed) + "_" + std::to_string(i) + ".json");
    write_instance(inst, path);
    paths.push_back(path);
  }
  return paths;
}

ProtocolResult cmd_protocol(const ProtocolCommand& c) {
  const ProblemInstance inst = read_instance(c.instance);
  return run_protocol(inst, c.p, c.config, load_table(c.table));
}

void write_overlay_csv(const ProtocolResult& result, std::ostream& out) {
  out << "order,";
  param_header(result.p, out);
  out << ",value,shots\n";
  for (std::size_t i = 0; i < result.trace.records.size(); ++i) {
    const auto& rec = result.trace.records[i];
    const QaoaParams raw = result.scaling.to_params(rec.point);
    out << i;
    for (double g : raw.gamma) out << ',' << format_double(g);
    for (double b : raw.beta) out << ',' << format_double(b);
    out << ',' << format_double(rec.value) << ',' << rec.shots << '\n';
  }
}

LandscapeOutputs cmd_landscape(const LandscapeCommand& c) {
  const ProblemInstance inst = rescale_instance(read_instance(c.instance)).instance;
  const ProblemFamily family = family_for(inst);
  const QaoaParams initial = transfer_parameters(
      family, initial_parameters(family, c.p, load_table(c.table)), num_qubits(inst));
  const MixerKind mixer =
      kind_of(inst) == ProblemKind::MaxCut ? MixerKind{TransverseX{}} : MixerKind{XYRing{c.trotter_reps}};
  std::vector<double> center = initial.gamma;
  center.insert(center.end(), initial.beta.begin(), initial.beta.end());
  const auto bounds = centered_box(center, c.box);
  const LandscapeGrid grid = compute_landscape(inst, c.p, mixer, bounds, c.resolution, center,
                                               kDefaultCellCap, default_worker_count());

  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw IoError("cannot create " + c.out_dir.string() + ": " + ec.message());
  LandscapeOutputs outputs{c.out_dir / "landscape.grid", c.out_dir / "landscape.csv", {}};
  export_grid(grid, outputs.grid);
  {
    auto out = open_output(outputs.csv);
    write_landscape_csv(grid, out);
  }
  if (c.overlay) {
    std::ifstream in(*c.overlay);
    if (!in) throw IoError("cannot open " + c.overlay->string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(c.overlay->string() + ": " + e.what());
    }
    const ProtocolResult result = result_from_json(j);
    if (result.p != c.p) throw ArgumentError("overlay record has a different p");
    outputs.overlay_csv = c.out_dir / "overlay.csv";
    auto out = open_output(*outputs.overlay_csv);
    write_overlay_csv(result, out);
  }
  return outputs;
}

int run(int argc, char** argv) {
  CLI::App app{"QAOA parameter setting under a shot budget"};
  app.require_subcommand(1);

  GenerateOptions gen;
  int gen_budget = 0;
  auto* generate = app.add_subcommand("generate", "Write random problem instances");
  generate->add_option("--kind", gen.kind, "maxcut, po or sk")->capture_default_str();
  generate->add_option("--n", gen.n, "Number of vertices or assets")->capture_default_str();
  generate->add_option("--count", gen.count)->capture_default_str();
  generate->add_option("--seed", gen.seed)->capture_default_str();
  generate->add_option("--out", gen.out_dir, "Output directory")->capture_default_str();
  auto* budget_opt = generate->add_option("--budget", gen_budget, "Portfolio size K");

  ProtocolCommand proto;
  double rhobeg = 0.0;
  double rhoend = 0.0;
  std::string backend = "sampled";
  std::string optimizer = "linear_trust_region";
  std::optional<fs::path> proto_out;
  std::string table_path;
  auto* protocol = app.add_subcommand("protocol", "Run the protocol on one instance");
  protocol->add_option("instance", proto.instance)->required()->check(CLI::ExistingFile);
  protocol->add_option("--p", proto.p)->capture_default_str();
  protocol->add_option("--shots", proto.config.total_shots, "Total shot budget")
      ->capture_default_str();
  protocol->add_option("--extra-evals", proto.config.extra_evals)->capture_default_str();
  auto* rhobeg_opt = protocol->add_option("--rhobeg", rhobeg, "Initial step (optimizer units)");
  auto* rhoend_opt = protocol->add_option("--rhoend", rhoend);
  protocol->add_option("--backend", backend, "exact, sampled or landscape")->capture_default_str();
  protocol->add_option("--optimizer", optimizer)->capture_default_str();
  protocol->add_option("--seed", proto.config.seed)->capture_default_str();
  protocol->add_option("--trotter-reps", proto.config.trotter_reps)->capture_default_str();
  protocol->add_option("--resolution", proto.config.landscape_resolution)->capture_default_str();
  protocol->add_option("--table", table_path, "Fixed-parameter table JSON");
  protocol->add_option("--out", proto_out, "Output file (default stdout)");

  LandscapeCommand land;
  std::string overlay_path;
  std::string land_table;
  auto* landscape = app.add_subcommand("landscape", "Compute a mean/std energy grid");
  landscape->add_option("instance", land.instance)->required()->check(CLI::ExistingFile);
  landscape->add_option("--p", land.p)->capture_default_str();
  landscape->add_option("--resolution", land.resolution)->capture_default_str();
  landscape->add_option("--box", land.box, "Box width per dimension")->capture_default_str();
  landscape->add_option("--trotter-reps", land.trotter_reps)->capture_default_str();
  landscape->add_option("--out", land.out_dir)->capture_default_str();
  landscape->add_option("--overlay", overlay_path, "Protocol record to overlay");
  landscape->add_option("--table", land_table);

  fs::path manifest;
  BenchOptions bench_opts;
  bench_opts.workers = default_worker_count();
  auto* bench = app.add_subcommand("bench", "Run a benchmark sweep");
  bench->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  bench->add_option("--out", bench_opts.out_dir)->capture_default_str();
  bench->add_option("--workers", bench_opts.workers)->capture_default_str();
  bench->add_flag("--timing", bench_opts.record_timing, "Report wall time");

  fs::path runs_path;
  fs::path report_out = ".";
  bool report_timing = false;
  auto* report = app.add_subcommand("report", "Aggregate a runs.jsonl file");
  report->add_option("runs", runs_path)->required()->check(CLI::ExistingFile);
  report->add_option("--out", report_out)->capture_default_str();
  report->add_flag("--timing", report_timing);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) {
      if (*budget_opt) gen.budget = gen_budget;
      for (const auto& path : cmd_generate(gen)) std::cout << path.string() << '\n';
      return kExitOk;
    }
    if (protocol->parsed()) {
      if (*rhobeg_opt) proto.config.rhobeg = rhobeg;
      if (*rhoend_opt) proto.config.rhoend = rhoend;
      proto.config.backend = backend_from_string(backend);
      proto.config.optimizer = optimizer_from_string(optimizer);
      if (!table_path.empty()) proto.table = table_path;
      const ProtocolResult result = cmd_protocol(proto);
      const std::string line = result_to_json(result).dump() + "\n";
      if (proto_out) {
        auto out = open_output(*proto_out);
        out << line;
      } else {
        std::cout << line;
      }
      if (result.degenerate()) {
        std::cerr << "degenerate instance: initial parameters are already optimal\n";
        return kExitDegenerate;
      }
      return kExitOk;
    }
    if (landscape->parsed()) {
      if (!overlay_path.empty()) land.overlay = overlay_path;
      if (!land_table.empty()) land.table = land_table;
      const auto outputs = cmd_landscape(land);
      std::cout << outputs.grid.string() << '\n' << outputs.csv.string() << '\n';
      if (outputs.overlay_csv) std::cout << outputs.overlay_csv->string() << '\n';
      return kExitOk;
    }
    if (bench->parsed()) {
      const BenchReport r = cmd_bench(manifest, bench_opts);
      write_report_csv(r, std::cout);
      return kExitOk;
    }
    if (report->parsed()) {
      const BenchReport r = aggregate_runs(read_runs(runs_path), report_timing);
      std::error_code ec;
      fs::create_directories(report_out, ec);
      {
        auto out = open_output(report_out / "report.csv");
        write_report_csv(r, out);
      }
      auto out = open_output(report_out / "contour.csv");
      write_contour_csv(r, out);
      write_report_csv(r, std::cout);
      return kExitOk;
    }
  } catch (const InfeasibleBudgetError& e) {
    std::cerr << "infeasible budget: " << e.what() << '\n';
    return kExitInfeasibleBudget;
  } catch (const DegenerateError& e) {
    std::cerr << "degenerate instance: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qaoa::cli
