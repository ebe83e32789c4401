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

#include "qaoa/landscape.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <random>

#include "json.hpp"
#include "qaoa/error.hpp"
#include "qaoa/parallel.hpp"

namespace qaoa {
namespace {

static_assert(std::endian::native == std::endian::little, "grid files assume a little-endian host");

constexpr char kMagic[8] = {'Q', 'A', 'O', 'A', 'G', 'R', 'I', 'D'};

std::size_t checked_cells(int resolution, int dims, std::size_t cap) {
  std::size_t cells = 1;
  for (int d = 0; d < dims; ++d) {
    if (cells > cap / static_cast<std::size_t>(resolution)) {
      throw CapacityError("landscape of " + std::to_string(resolution) + "^" +
                          std::to_string(dims) + " cells exceeds the cap of " +
                          std::to_string(cap));
    }
    cells *= static_cast<std::size_t>(resolution);
  }
  if (cells > cap) throw CapacityError("landscape exceeds the cell cap");
  return cells;
}

QaoaParams params_from_point(std::span<const double> point, int p) {
  QaoaParams params;
  params.gamma.assign(point.begin(), point.begin() + p);
  params.beta.assign(point.begin() + p, point.begin() + 2 * p);
  return params;
}

void fnv1a(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

double LandscapeGrid::coordinate(int dim, int index) const {
  const auto& b = bounds[dim];
  if (index == resolution - 1) return b.hi;
  return b.lo + (b.hi - b.lo) * index / (resolution - 1);
}

std::vector<double> LandscapeGrid::node_point(std::size_t flat) const {
  std::vector<double> point(dims);
  for (int d = dims - 1; d >= 0; --d) {
    point[d] = coordinate(d, static_cast<int>(flat % resolution));
    flat /= resolution;
  }
  return point;
}

void LandscapeGrid::validate() const {
  if (dims < 1 || resolution < 2) throw SchemaError("grid needs dims >= 1 and resolution >= 2");
  if (bounds.size() != static_cast<std::size_t>(dims) ||
      center.size() != static_cast<std::size_t>(dims)) {
    throw SchemaError("grid bounds/center length must equal dims");
  }
  for (const auto& b : bounds) {
    if (!(b.lo < b.hi)) throw SchemaError("grid bounds need lo < hi");
  }
  std::size_t cells = 1;
  for (int d = 0; d < dims; ++d) cells *= static_cast<std::size_t>(resolution);
  if (mean.size() != cells || std.size() != cells) {
    throw SchemaError("grid payload size does not match resolution^dims");
  }
  for (double s : std) {
    if (!(s >= 0.0)) throw SchemaError("grid std must be non-negative");
  }
}

std::vector<GridBounds> centered_box(std::span<const double> center, double width) {
  std::vector<GridBounds> box;
  for (double c : center) box.push_back({c - width / 2.0, c + width / 2.0});
  return box;
}

LandscapeGrid compute_landscape(const QaoaCircuit& circuit, int p,
                                std::span<const GridBounds> bounds, int resolution,
                                std::span<const double> center, std::size_t cell_cap,
                                int workers) {
  if (p < 1) throw ArgumentError("QAOA depth must be >= 1");
  if (resolution < 2) throw ArgumentError("landscape resolution must be >= 2");
  const int dims = 2 * p;
  if (bounds.size() != static_cast<std::size_t>(dims)) {
    throw DimensionError("landscape needs " + std::to_string(dims) + " bounds");
  }
  const std::size_t cells = checked_cells(resolution, dims, cell_cap);

  LandscapeGrid grid;
  grid.dims = dims;
  grid.resolution = resolution;
  grid.bounds.assign(bounds.begin(), bounds.end());
  if (center.empty()) {
    for (const auto& b : bounds) grid.center.push_back(0.5 * (b.lo + b.hi));
  } else {
    if (center.size() != bounds.size()) throw DimensionError("center length must equal dims");
    grid.center.assign(center.begin(), center.end());
  }
  for (const auto& b : grid.bounds) {
    if (!(b.lo < b.hi)) throw ArgumentError("landscape bounds need lo < hi");
  }
  grid.mean.resize(cells);
  grid.std.resize(cells);
  parallel_for(cells, workers, [&](std::size_t node) {
    const auto point = grid.node_point(node);
    const StateVector sv = run_qaoa(circuit, params_from_point(point, p));
    const EnergyMoments m = energy_moments(sv, circuit.hamiltonian);
    grid.mean[node] = m.mean;
    grid.std[node] = m.std;
  });
  return grid;
}

LandscapeGrid compute_landscape(const ProblemInstance& inst, int p, const MixerKind& mixer,
                                std::span<const GridBounds> bounds, int resolution,
                                std::span<const double> center, std::size_t cell_cap,
                                int workers) {
  return compute_landscape(make_circuit(inst, mixer), p, bounds, resolution, center, cell_cap,
                           workers);
}

InterpolatedValue interpolate(const LandscapeGrid& grid, std::span<const double> point) {
  if (point.size() != static_cast<std::size_t>(grid.dims)) {
    throw DimensionError("query point has the wrong dimension");
  }
  InterpolatedValue out;
  const int dims = grid.dims;
  const int res = grid.resolution;
  std::vector<int> base(dims);
  std::vector<double> frac(dims);
  for (int d = 0; d < dims; ++d) {
    const auto& b = grid.bounds[d];
    double x = point[d];
    if (x < b.lo || x > b.hi || !std::isfinite(x)) {
      out.clamped = true;
      x = std::isfinite(x) ? std::clamp(x, b.lo, b.hi) : b.lo;
    }
    double t = (x - b.lo) / (b.hi - b.lo) * (res - 1);
    const double nearest = std::round(t);
    if (std::abs(t - nearest) < 1e-9) t = nearest;
    int i = static_cast<int>(std::floor(t));
    i = std::clamp(i, 0, res - 2);
    base[d] = i;
    frac[d] = t - i;
  }
  const std::size_t corners = std::size_t{1} << dims;
  for (std::size_t c = 0; c < corners; ++c) {
    double weight = 1.0;
    std::size_t flat = 0;
    for (int d = 0; d < dims; ++d) {
      const bool upper = (c >> d) & 1U;
      weight *= upper ? frac[d] : 1.0 - frac[d];
      flat = flat * res + static_cast<std::size_t>(base[d] + (upper ? 1 : 0));
    }
    if (weight == 0.0) continue;
    out.mean += weight * grid.mean[flat];
    out.std += weight * grid.std[flat];
  }
  return out;
}

double sampled_eval(const LandscapeGrid& grid, std::span<const double> point, long shots,
                    std::uint64_t seed) {
  if (shots < 1) throw ArgumentError("shots must be >= 1");
  const InterpolatedValue v = interpolate(grid, point);
  if (v.std == 0.0) return v.mean;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  return v.mean + normal(rng) * v.std / std::sqrt(static_cast<double>(shots));
}

LandscapeOracle::LandscapeOracle(std::shared_ptr<const LandscapeGrid> grid, Mapping to_grid,
                                 double sign)
    : grid_(std::move(grid)), to_grid_(std::move(to_grid)), sign_(sign) {
  if (!grid_) throw ArgumentError("landscape oracle needs a grid");
}

double LandscapeOracle::evaluate(std::span<const double> point, long shots,
                                 std::uint64_t seed) const {
  const std::vector<double> q = to_grid_ ? to_grid_(point) : std::vector<double>(point.begin(), point.end());
  const InterpolatedValue v = interpolate(*grid_, q);
  if (v.clamped) clamps_.fetch_add(1);
  return sign_ * sampled_eval(*grid_, q, shots, seed);
}

std::uint64_t grid_checksum(const LandscapeGrid& grid) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv1a(h, grid.mean.data(), grid.mean.size() * sizeof(double));
  fnv1a(h, grid.std.data(), grid.std.size() * sizeof(double));
  return h;
}

void export_grid(const LandscapeGrid& grid, const std::filesystem::path& path) {
  grid.validate();
  nlohmann::json header = {
      {"schema_version", kGridSchemaVersion},
      {"dims", grid.dims},
      {"resolution", grid.resolution},
      {"center", grid.center},
      {"nodes", grid.node_count()},
      {"checksum", std::to_string(grid_checksum(grid))},
  };
  header["bounds"] = nlohmann::json::array();
  for (const auto& b : grid.bounds) header["bounds"].push_back({b.lo, b.hi});
  const std::string text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const auto len = static_cast<std::uint32_t>(text.size());
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(reinterpret_cast<const char*>(grid.mean.data()),
            static_cast<std::streamsize>(grid.mean.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(grid.std.data()),
            static_cast<std::streamsize>(grid.std.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
}

LandscapeGrid import_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[sizeof(kMagic)] = {};
  std::uint32_t len = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw SchemaError(path.string() + ": not a landscape grid file");
  }
  if (len > (1U << 24)) throw SchemaError(path.string() + ": implausible header length");
  std::string text(len, '\0');
  in.read(text.data(), len);
  if (!in) throw SchemaError(path.string() + ": truncated header");

  LandscapeGrid grid;
  std::string checksum;
  std::size_t nodes = 0;
  try {
    const auto header = nlohmann::json::parse(text);
    const int version = header.at("schema_version").get<int>();
    if (version != kGridSchemaVersion) {
      throw SchemaError(path.string() + ": unsupported schema_version " + std::to_string(version));
    }
    grid.dims = header.at("dims").get<int>();
    grid.resolution = header.at("resolution").get<int>();
    grid.center = header.at("center").get<std::vector<double>>();
    for (const auto& b : header.at("bounds")) {
      grid.bounds.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    }
    nodes = header.at("nodes").get<std::size_t>();
    checksum = header.at("checksum").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": bad header: " + e.what());
  }
  if (nodes > (std::size_t{1} << 32)) throw SchemaError(path.string() + ": implausible node count");
  grid.mean.resize(nodes);
  grid.std.resize(nodes);
  in.read(reinterpret_cast<char*>(grid.mean.data()),
          static_cast<std::streamsize>(nodes * sizeof(double)));
  in.read(reinterpret_cast<char*>(grid.std.data()),
          static_cast<std::streamsize>(nodes * sizeof(double)));
  if (!in) throw SchemaError(path.string() + ": truncated payload");
  if (std::to_string(grid_checksum(grid)) != checksum) {
    throw SchemaError(path.string() + ": checksum mismatch");
  }
  grid.validate();
  return grid;
}

void write_landscape_csv(const LandscapeGrid& grid, std::ostream& out) {
  const int p = grid.dims / 2;
  for (int k = 0; k < p; ++k) out << (p == 1 ? "gamma," : "gamma_" + std::to_string(k) + ",");
  for (int k = 0; k < p; ++k) out << (p == 1 ? "beta," : "beta_" + std::to_string(k) + ",");
  out << "mean,std\n";
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    for (double c : grid.node_point(node)) out << format_double(c) << ',';
    out << format_double(grid.mean[node]) << ',' << format_double(grid.std[node]) << '\n';
  }
}

}  // namespace qaoa
