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
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "qaoa/cli.hpp"
#include "qaoa/error.hpp"
#include "qaoa/instance_io.hpp"
#include "qaoa/parallel.hpp"
#include "qaoa/seeding.hpp"

namespace qaoa::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Accepts a scalar or an array; reports the failing element path.
template <typename T>
std::vector<T> list_field(const json& j, const std::string& key, std::vector<T> fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j[key];
  std::vector<T> out;
  auto convert = [&](const json& e, const std::string& where) {
    try {
      out.push_back(e.get<T>());
    } catch (const json::exception&) {
      throw SchemaError("manifest." + where + ": wrong type");
    }
  };
  if (v.is_array()) {
    if (v.empty()) throw SchemaError("manifest." + key + ": empty list");
    for (std::size_t i = 0; i < v.size(); ++i) {
      convert(v[i], key + "[" + std::to_string(i) + "]");
    }
  } else {
    convert(v, key);
  }
  return out;
}

template <typename T>
T scalar_field(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw SchemaError("manifest." + key + ": wrong type");
  }
}

std::string pad(long v, int width) {
  std::string s = std::to_string(v);
  if (static_cast<int>(s.size()) < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::string rhobeg_label(const std::optional<double>& r) {
  return r ? format_double(*r) : std::string("default");
}

// Stable across platforms, unlike std::hash.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string run_key(const std::string& cell, int instance, int rep) {
  return cell + "#" + std::to_string(instance) + "#" + std::to_string(rep);
}

}  // namespace

BenchManifest BenchManifest::from_json(const json& j, const fs::path& base) {
  if (!j.is_object()) throw SchemaError("manifest: expected an object");
  BenchManifest m;
  if (!j.contains("instances")) throw SchemaError("manifest.instances: missing");
  const json& inst = j["instances"];
  if (inst.is_array()) {
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (!inst[i].is_string()) {
        throw SchemaError("manifest.instances[" + std::to_string(i) + "]: expected a path");
      }
      fs::path p = inst[i].get<std::string>();
      m.instance_files.push_back(p.is_absolute() ? p : base / p);
    }
    if (m.instance_files.empty()) throw SchemaError("manifest.instances: empty list");
  } else if (inst.is_object()) {
    GenerateOptions g;
    g.kind = scalar_field<std::string>(inst, "kind", g.kind);
    g.n = scalar_field<int>(inst, "n", g.n);
    g.count = scalar_field<int>(inst, "count", g.count);
    g.seed = scalar_field<std::uint64_t>(inst, "seed", g.seed);
    if (inst.contains("budget")) g.budget = scalar_field<int>(inst, "budget", 0);
    if (g.count < 1) throw SchemaError("manifest.instances.count: must be at least 1");
    m.generate = g;
  } else {
    throw SchemaError("manifest.instances: expected a list of paths or a generator object");
  }

  m.p = list_field<int>(j, "p", m.p);
  std::vector<std::string> opts = list_field<std::string>(j, "optimizers", {"linear_trust_region"});
  m.optimizers.clear();
  for (std::size_t i = 0; i < opts.size(); ++i) {
    try {
      m.optimizers.push_back(optimizer_from_string(opts[i]));
    } catch (const ArgumentError& e) {
      throw SchemaError("manifest.optimizers[" + std::to_string(i) + "]: " + e.what());
    }
  }
  if (j.contains("rhobeg")) {
    m.rhobeg.clear();
    const json& r = j["rhobeg"];
    const json list = r.is_array() ? r : json::array({r});
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].is_null()) {
        m.rhobeg.push_back(std::nullopt);
      } else if (list[i].is_number() && list[i].get<double>() > 0.0) {
        m.rhobeg.push_back(list[i].get<double>());
      } else {
        throw SchemaError("manifest.rhobeg[" + std::to_string(i) + "]: expected a positive number");
      }
    }
  }
  m.extra_evals = list_field<int>(j, "extra_evals", m.extra_evals);
  if (j.contains("shots_per_eval") && j.contains("total_shots")) {
    throw SchemaError("manifest: give either total_shots or shots_per_eval, not both");
  }
  if (j.contains("shots_per_eval")) {
    m.shots_per_eval = list_field<long>(j, "shots_per_eval", {});
    m.total_shots.clear();
  } else {
    m.total_shots = list_field<long>(j, "total_shots", m.total_shots);
  }
  try {
    m.backend = backend_from_string(scalar_field<std::string>(j, "backend", "sampled"));
  } catch (const ArgumentError& e) {
    throw SchemaError(std::string("manifest.backend: ") + e.what());
  }
  m.landscape_resolution = scalar_field<int>(j, "landscape_resolution", m.landscape_resolution);
  m.trotter_reps = scalar_field<int>(j, "trotter_reps", m.trotter_reps);
  m.repetitions = scalar_field<int>(j, "repetitions", m.repetitions);
  m.master_seed = scalar_field<std::uint64_t>(j, "master_seed", m.master_seed);
  if (m.repetitions < 1) throw SchemaError("manifest.repetitions: must be at least 1");
  for (std::size_t i = 0; i < m.p.size(); ++i) {
    if (m.p[i] < 1) throw SchemaError("manifest.p[" + std::to_string(i) + "]: must be >= 1");
  }
  for (std::size_t i = 0; i < m.extra_evals.size(); ++i) {
    if (m.extra_evals[i] < 0) {
      throw SchemaError("manifest.extra_evals[" + std::to_string(i) + "]: must be >= 0");
    }
  }
  return m;
}

BenchManifest BenchManifest::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

std::vector<BenchCell> BenchManifest::cells() const {
  std::vector<BenchCell> out;
  for (int p : this->p) {
    for (OptimizerKind opt : optimizers) {
      for (const auto& rb : rhobeg) {
        for (int ee : extra_evals) {
          std::vector<long> totals = total_shots;
          if (!shots_per_eval.empty()) {
            totals.clear();
            for (long s : shots_per_eval) totals.push_back(s * (2L * p + 1 + ee));
          }
          for (long total : totals) {
            BenchCell c{"", p, opt, rb, ee, total};
            c.id = "p" + pad(p, 2) + "-" + std::string(to_string(opt)) + "-rb" +
                   rhobeg_label(rb) + "-ee" + pad(ee, 4) + "-ts" + pad(total, 9);
            out.push_back(std::move(c));
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

json BenchRun::to_json() const {
  return {{"cell", cell},
          {"p", p},
          {"optimizer", optimizer},
          {"rhobeg", rhobeg ? json(*rhobeg) : json(nullptr)},
          {"total_shots", total_shots},
          {"extra_evals", extra_evals},
          {"instance", instance},
          {"rep", rep},
          {"seed", seed},
          {"relative_improvement",
           relative_improvement ? json(*relative_improvement) : json(nullptr)},
          {"ar_ini", ar_ini},
          {"ar_final", ar_final},
          {"ar_opt", ar_opt},
          {"shots_used", shots_used},
          {"evaluations", evaluations},
          {"shots_per_eval", shots_per_eval},
          {"wall_seconds", wall_seconds}};
}

BenchRun BenchRun::from_json(const json& j) {
  BenchRun r;
  try {
    r.cell = j.at("cell").get<std::string>();
    r.p = j.at("p").get<int>();
    r.optimizer = j.at("optimizer").get<std::string>();
    if (!j.at("rhobeg").is_null()) r.rhobeg = j["rhobeg"].get<double>();
    r.total_shots = j.at("total_shots").get<long>();
    r.extra_evals = j.at("extra_evals").get<int>();
    r.instance = j.at("instance").get<int>();
    r.rep = j.at("rep").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("relative_improvement").is_null()) {
      r.relative_improvement = j["relative_improvement"].get<double>();
    }
    r.ar_ini = j.at("ar_ini").get<double>();
    r.ar_final = j.at("ar_final").get<double>();
    r.ar_opt = j.at("ar_opt").get<double>();
    r.shots_used = j.at("shots_used").get<long>();
    r.evaluations = j.at("evaluations").get<int>();
    r.shots_per_eval = j.at("shots_per_eval").get<long>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("run record: ") + e.what());
  }
  return r;
}

std::uint64_t run_seed(std::uint64_t master_seed, const std::string& cell_id, int instance,
                       int rep) {
  return derive_seed(master_seed, {fnv1a(cell_id), static_cast<std::uint64_t>(instance),
                                   static_cast<std::uint64_t>(rep)});
}

std::vector<BenchRun> read_runs(const fs::path& jsonl) {
  std::vector<BenchRun> runs;
  std::ifstream in(jsonl);
  if (!in) return runs;
  std::string line;
  // A torn final line from an interrupted sweep is dropped; its cell reruns.
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) continue;
    runs.push_back(BenchRun::from_json(j));
  }
  return runs;
}

BenchReport aggregate_runs(const std::vector<BenchRun>& runs, bool record_timing) {
  std::map<std::string, std::vector<const BenchRun*>> by_cell;
  for (const auto& r : runs) by_cell[r.cell].push_back(&r);
  BenchReport report;
  for (const auto& [id, group] : by_cell) {
    const BenchRun& first = *group.front();
    BenchRow row;
    row.config_id = id;
    row.p = first.p;
    row.optimizer = first.optimizer;
    row.rhobeg = first.rhobeg;
    row.total_shots = first.total_shots;
    row.extra_evals = first.extra_evals;
    row.shots_per_eval = first.shots_per_eval;
    row.instance_count = static_cast<int>(group.size());
    std::vector<double> values;
    double shots = 0.0;
    double wall = 0.0;
    for (const BenchRun* r : group) {
      if (r->relative_improvement) {
        values.push_back(*r->relative_improvement);
      } else {
        ++row.skipped;
      }
      shots += static_cast<double>(r->shots_used);
      wall += r->wall_seconds;
    }
    if (values.empty()) {
      row.mean_improvement = std::numeric_limits<double>::quiet_NaN();
      row.standard_error = std::numeric_limits<double>::quiet_NaN();
    } else {
      const MeanWithError m = mean_and_stderr(values);
      row.mean_improvement = m.mean;
      row.standard_error = m.stderr_;
    }
    row.mean_shots_used = shots / static_cast<double>(group.size());
    row.wall_seconds = record_timing ? wall : 0.0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_report_csv(const BenchReport& report, std::ostream& out) {
  out << "config_id,p,optimizer,rhobeg,total_shots,extra_evals,shots_per_eval,instance_count,"
         "skipped,mean_improvement,standard_error,mean_shots_used,wall_seconds\n";
  for (const auto& r : report.rows) {
    out << r.config_id << ',' << r.p << ',' << r.optimizer << ',' << rhobeg_label(r.rhobeg) << ','
        << r.total_shots << ',' << r.extra_evals << ',' << r.shots_per_eval << ','
        << r.instance_count << ',' << r.skipped << ',' << format_double(r.mean_improvement) << ','
        << format_double(r.standard_error) << ',' << format_double(r.mean_shots_used) << ','
        << format_double(r.wall_seconds) << '\n';
  }
}

void write_contour_csv(const BenchReport& report, std::ostream& out) {
  out << "config_id,p,optimizer,rhobeg,total_shots,extra_evals,shots_per_eval,mean_improvement\n";
  for (const auto& r : report.rows) {
    out << r.config_id << ',' << r.p << ',' << r.optimizer << ',' << rhobeg_label(r.rhobeg) << ','
        << r.total_shots << ',' << r.extra_evals << ',' << r.shots_per_eval << ','
        << format_double(r.mean_improvement) << '\n';
  }
}

BenchReport cmd_bench(const fs::path& manifest, const BenchOptions& options) {
  return cmd_bench(BenchManifest::load(manifest), options);
}

BenchReport cmd_bench(const BenchManifest& m, const BenchOptions& options) {
  std::vector<ProblemInstance> instances;
  if (m.generate) {
    for (int i = 0; i < m.generate->count; ++i) instances.push_back(generate_instance(*m.generate, i));
  } else {
    for (const auto& path : m.instance_files) instances.push_back(read_instance(path));
  }
  const int n_inst = static_cast<int>(instances.size());
  const std::vector<BenchCell> cells = m.cells();

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw IoError("cannot create " + options.out_dir.string() + ": " + ec.message());
  const fs::path runs_path = options.out_dir / "runs.jsonl";

  std::set<std::string> cell_ids;
  for (const auto& c : cells) cell_ids.insert(c.id);
  std::map<std::string, BenchRun> done;
  for (auto& r : read_runs(runs_path)) {
    if (cell_ids.count(r.cell)) done[run_key(r.cell, r.instance, r.rep)] = std::move(r);
  }
  auto cell_complete = [&](const BenchCell& c) {
    for (int i = 0; i < n_inst; ++i) {
      for (int rep = 0; rep < m.repetitions; ++rep) {
        if (!done.count(run_key(c.id, i, rep))) return false;
      }
    }
    return true;
  };

  std::vector<const BenchCell*> todo;
  std::set<int> depths;
  for (const auto& c : cells) {
    if (!cell_complete(c)) {
      todo.push_back(&c);
      depths.insert(c.p);
    }
  }

  const FixedParameterTable table = FixedParameterTable::builtin();
  std::map<int, std::vector<PreparedInstance>> prepared;
  for (int p : depths) {
    PrepareOptions po;
    po.trotter_reps = m.trotter_reps;
    if (m.backend == Backend::LandscapeOracle) po.landscape_resolution = m.landscape_resolution;
    auto& vec = prepared[p];
    vec.resize(instances.size());
    parallel_for(instances.size(), options.workers, [&](std::size_t i) {
      vec[i] = prepare_instance(instances[i], p, table, po);
    });
  }

  // Rewrite the kept records so a torn tail cannot swallow the next append.
  std::ofstream out(runs_path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoError("cannot open " + runs_path.string() + " for writing");
  for (const auto& c : cells) {
    const bool complete = cell_complete(c);
    for (int i = 0; i < n_inst; ++i) {
      for (int rep = 0; rep < m.repetitions; ++rep) {
        const auto it = done.find(run_key(c.id, i, rep));
        if (it == done.end()) continue;
        if (complete) {
          out << it->second.to_json().dump() << '\n';
        } else {
          done.erase(it);
        }
      }
    }
  }
  out.flush();
  for (const BenchCell* cell : todo) {
    const auto& preps = prepared.at(cell->p);
    std::vector<BenchRun> runs(static_cast<std::size_t>(n_inst) * m.repetitions);
    parallel_for(runs.size(), options.workers, [&](std::size_t k) {
      const int i = static_cast<int>(k) / m.repetitions;
      const int rep = static_cast<int>(k) % m.repetitions;
      ProtocolConfig config;
      config.total_shots = cell->total_shots;
      config.extra_evals = cell->extra_evals;
      config.rhobeg = cell->rhobeg;
      config.optimizer = cell->optimizer;
      config.backend = m.backend;
      config.trotter_reps = m.trotter_reps;
      config.landscape_resolution = m.landscape_resolution;
      config.seed = run_seed(m.master_seed, cell->id, i, rep);
      const auto start = std::chrono::steady_clock::now();
      const ProtocolResult res = run_protocol(preps[i], config);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      BenchRun& r = runs[k];
      r.cell = cell->id;
      r.p = cell->p;
      r.optimizer = std::string(to_string(cell->optimizer));
      r.rhobeg = cell->rhobeg;
      r.total_shots = cell->total_shots;
      r.extra_evals = cell->extra_evals;
      r.instance = i;
      r.rep = rep;
      r.seed = config.seed;
      r.relative_improvement = res.relative_improvement;
      r.ar_ini = res.ar_ini;
      r.ar_final = res.ar_final;
      r.ar_opt = res.ar_opt;
      r.shots_used = res.trace.shots_used();
      r.evaluations = static_cast<int>(res.trace.records.size());
      r.shots_per_eval = res.plan.shots_per_eval;
      r.wall_seconds = options.record_timing ? elapsed.count() : 0.0;
    });
    for (auto& r : runs) {
      out << r.to_json().dump() << '\n';
      done[run_key(r.cell, r.instance, r.rep)] = std::move(r);
    }
    out.flush();
  }
  out.close();

  std::vector<BenchRun> all;
  for (auto& [key, r] : done) all.push_back(r);
  BenchReport report = aggregate_runs(all, options.record_timing);
  {
    std::ofstream rep(options.out_dir / "report.csv", std::ios::binary);
    if (!rep) throw IoError("cannot write report.csv in " + options.out_dir.string());
    write_report_csv(report, rep);
  }
  std::ofstream contour(options.out_dir / "contour.csv", std::ios::binary);
  if (!contour) throw IoError("cannot write contour.csv in " + options.out_dir.string());
  write_contour_csv(report, contour);
  return report;
}

}  // namespace qaoa::cli
