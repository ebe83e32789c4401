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

// Precomputed mean/std energy grids over a box of QAOA parameters, served as a
// cheap objective oracle: interpolate the mean and std at a query point and add
// Gaussian shot noise N(0, std^2 / shots).
//
// Parameter vectors are ordered (gamma_0..gamma_{p-1}, beta_0..beta_{p-1}).
// Nodes are stored row-major: dimension 0 varies slowest.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "qaoa/dfo.hpp"
#include "qaoa/simulator.hpp"

namespace qaoa {

inline constexpr std::size_t kDefaultCellCap = 10'000'000;
inline constexpr int kGridSchemaVersion = 1;
inline constexpr double kDefaultBoxWidth = std::numbers::pi / 4.0;
inline constexpr int kDefaultResolution = 128;

struct GridBounds {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const GridBounds&) const = default;
};

struct LandscapeGrid {
  int dims = 0;
  int resolution = 0;
  std::vector<GridBounds> bounds;
  std::vector<double> center;
  std::vector<double> mean;
  std::vector<double> std;

  std::size_t node_count() const { return mean.size(); }
  double coordinate(int dim, int index) const;
  /// Parameter point of a flat node index.
  std::vector<double> node_point(std::size_t flat) const;
  /// Throws SchemaError on inconsistent sizes, lo >= hi, or negative std.
  void validate() const;
};

/// Box of `width` per dimension centered on `center`.
std::vector<GridBounds> centered_box(std::span<const double> center,
                                     double width = kDefaultBoxWidth);

/// Exact mean/std energy of the circuit at every node. Throws CapacityError
/// when resolution^dims exceeds cell_cap. `center` defaults to the box middle.
LandscapeGrid compute_landscape(const QaoaCircuit& circuit, int p,
                                std::span<const GridBounds> bounds, int resolution,
                                std::span<const double> center = {},
                                std::size_t cell_cap = kDefaultCellCap, int workers = 1);
LandscapeGrid compute_landscape(const ProblemInstance& inst, int p, const MixerKind& mixer,
                                std::span<const GridBounds> bounds, int resolution,
                                std::span<const double> center = {},
                                std::size_t cell_cap = kDefaultCellCap, int workers = 1);

struct InterpolatedValue {
  double mean = 0.0;
  double std = 0.0;
  bool clamped = false;
};

/// Multilinear interpolation of mean and std independently. Points outside the
/// box are clamped to it and reported through `clamped`.
InterpolatedValue interpolate(const LandscapeGrid& grid, std::span<const double> point);

/// mean(point) + z std(point) / sqrt(shots), z ~ N(0,1) drawn from `seed`.
double sampled_eval(const LandscapeGrid& grid, std::span<const double> point, long shots,
                    std::uint64_t seed);

/// ObjectiveOracle over a grid. `to_grid` maps optimizer coordinates to grid
/// parameters; `sign` multiplies the energy (-1 turns maximization into
/// minimization).
class LandscapeOracle final : public dfo::ObjectiveOracle {
 public:
  using Mapping = std::function<std::vector<double>(std::span<const double>)>;

  LandscapeOracle(std::shared_ptr<const LandscapeGrid> grid, Mapping to_grid, double sign = 1.0);

  int dimension() const override { return grid_->dims; }
  double evaluate(std::span<const double> point, long shots, std::uint64_t seed) const override;

  long clamp_events() const { return clamps_.load(); }

 private:
  std::shared_ptr<const LandscapeGrid> grid_;
  Mapping to_grid_;
  double sign_;
  mutable std::atomic<long> clamps_{0};
};

/// Binary container: 8-byte magic, u32 header length, JSON header
/// {schema_version, dims, resolution, bounds, center, nodes, checksum}, then
/// mean[] and std[] as little-endian float64.
void export_grid(const LandscapeGrid& grid, const std::filesystem::path& path);
/// Throws SchemaError on a bad magic/header/version/checksum, IoError on I/O.
LandscapeGrid import_grid(const std::filesystem::path& path);

/// CSV rows "gamma_0,...,beta_{p-1},mean,std" in node order.
void write_landscape_csv(const LandscapeGrid& grid, std::ostream& out);

/// FNV-1a over the mean and std payload bytes.
std::uint64_t grid_checksum(const LandscapeGrid& grid);

}  // namespace qaoa
