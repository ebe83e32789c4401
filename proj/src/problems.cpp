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

#include "qaoa/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "qaoa/error.hpp"
#include "qaoa/seeding.hpp"

namespace qaoa {
namespace {

void check_capacity(int n, int max_qubits) {
  if (n < 1) throw ArgumentError("qubit count must be positive, got " + std::to_string(n));
  if (n > max_qubits || n > 62) {
    throw CapacityError("instance has " + std::to_string(n) + " qubits, limit is " +
                        std::to_string(max_qubits));
  }
}

}  // namespace

void MaxCutInstance::validate() const {
  if (n < 2) throw ArgumentError("MaxCut instance needs n >= 2");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw ArgumentError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                          ") out of range for n=" + std::to_string(n));
    }
    if (e.u == e.v) throw ArgumentError("self-loop on vertex " + std::to_string(e.u));
    if (!std::isfinite(e.w)) throw ArgumentError("non-finite edge weight");
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert({key.first, key.second}).second) {
      throw ArgumentError("duplicate edge (" + std::to_string(key.first) + "," +
                          std::to_string(key.second) + ")");
    }
  }
}

void PortfolioInstance::validate() const {
  if (n < 2) throw ArgumentError("portfolio instance needs n >= 2");
  if (mu.size() != static_cast<std::size_t>(n)) throw ArgumentError("mu must have length n");
  if (sigma.size() != static_cast<std::size_t>(n) * n) {
    throw ArgumentError("sigma must be n x n");
  }
  if (budget < 1 || budget > n - 1) {
    throw ArgumentError("budget K=" + std::to_string(budget) + " outside [1, n-1]");
  }
  if (!std::isfinite(q)) throw ArgumentError("risk factor must be finite");
  for (double m : mu) {
    if (!std::isfinite(m)) throw ArgumentError("mu must be finite");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double a = cov(i, j);
      if (!std::isfinite(a)) throw ArgumentError("sigma must be finite");
      if (std::abs(a - cov(j, i)) > 1e-12 * std::max(1.0, std::abs(a))) {
        throw ArgumentError("sigma is not symmetric at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
      }
    }
  }
}

ProblemKind kind_of(const ProblemInstance& inst) {
  return std::holds_alternative<MaxCutInstance>(inst) ? ProblemKind::MaxCut
                                                      : ProblemKind::Portfolio;
}

int num_qubits(const ProblemInstance& inst) {
  return std::visit([](const auto& i) { return i.n; }, inst);
}

std::optional<int> feasible_weight(const ProblemInstance& inst) {
  if (const auto* po = std::get_if<PortfolioInstance>(&inst)) return po->budget;
  return std::nullopt;
}

DiagonalHamiltonian build_maxcut_hamiltonian(const MaxCutInstance& inst, int max_qubits) {
  check_capacity(inst.n, max_qubits);
  inst.validate();
  DiagonalHamiltonian h;
  h.n = inst.n;
  h.energies.assign(std::size_t{1} << inst.n, 0.0);
  for (const Edge& e : inst.edges) h.offset += e.w / 2.0;
  for (std::size_t x = 0; x < h.energies.size(); ++x) {
    double cut = 0.0;
    for (const Edge& e : inst.edges) {
      if (((x >> e.u) ^ (x >> e.v)) & 1U) cut += e.w;
    }
    h.energies[x] = cut;
  }
  return h;
}

DiagonalHamiltonian build_po_hamiltonian(const PortfolioInstance& inst, int max_qubits) {
  check_capacity(inst.n, max_qubits);
  inst.validate();
  const int n = inst.n;
  DiagonalHamiltonian h;
  h.n = n;
  h.energies.assign(std::size_t{1} << n, 0.0);
  h.offset = portfolio_ising_form(inst).constant;
  // f(x) = f(x \ {i}) + q S_ii - mu_i + 2 q sum_{j in x \ {i}} S_ij, i = lowest set bit.
  for (std::size_t x = 1; x < h.energies.size(); ++x) {
    const int i = __builtin_ctzll(x);
    const std::size_t rest = x & (x - 1);
    double cross = 0.0;
    for (std::size_t r = rest; r != 0; r &= r - 1) cross += inst.cov(i, __builtin_ctzll(r));
    h.energies[x] = h.energies[rest] + inst.q * inst.cov(i, i) - inst.mu[i] + 2.0 * inst.q * cross;
  }
  return h;
}

DiagonalHamiltonian build_hamiltonian(const ProblemInstance& inst, int max_qubits) {
  return std::visit(
      [&](const auto& i) {
        if constexpr (std::is_same_v<std::decay_t<decltype(i)>, MaxCutInstance>) {
          return build_maxcut_hamiltonian(i, max_qubits);
        } else {
          return build_po_hamiltonian(i, max_qubits);
        }
      },
      inst);
}

double IsingForm::evaluate(Bitstring x) const {
  auto spin = [x](int i) { return ((x >> i) & 1U) ? -1.0 : 1.0; };
  double value = constant;
  for (const auto& t : quadratic) value += t.w * spin(t.i) * spin(t.j);
  for (const auto& t : linear) value += t.h * spin(t.i);
  return value;
}

IsingForm portfolio_ising_form(const PortfolioInstance& inst) {
  const int n = inst.n;
  IsingForm form;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double w = 0.5 * inst.q * inst.cov(i, j);
      if (w != 0.0) form.quadratic.push_back({i, j, w});
    }
  }
  double constant = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    double upper = 0.0;
    for (int j = 0; j < n; ++j) {
      row += inst.cov(i, j);
      if (j >= i) upper += inst.cov(i, j);
    }
    double h = -0.5 * (inst.q * row - inst.mu[i]);
    if (h != 0.0) form.linear.push_back({i, h});
    constant += 0.5 * (inst.q * upper - inst.mu[i]);
  }
  form.constant = constant;
  return form;
}

double rescale_divisor(const ProblemInstance& inst) {
  double quad_sq = 0.0;
  std::size_t quad_count = 0;
  double lin_sq = 0.0;
  std::size_t lin_count = 0;
  if (const auto* mc = std::get_if<MaxCutInstance>(&inst)) {
    for (const Edge& e : mc->edges) quad_sq += e.w * e.w;
    quad_count = mc->edges.size();
  } else {
    IsingForm form = portfolio_ising_form(std::get<PortfolioInstance>(inst));
    for (const auto& t : form.quadratic) quad_sq += t.w * t.w;
    for (const auto& t : form.linear) lin_sq += t.h * t.h;
    quad_count = form.quadratic.size();
    lin_count = form.linear.size();
  }
  double sum = 0.0;
  if (quad_count > 0) sum += quad_sq / static_cast<double>(quad_count);
  if (lin_count > 0) sum += lin_sq / static_cast<double>(lin_count);
  return std::sqrt(sum);
}

RescaledInstance rescale_instance(const ProblemInstance& inst) {
  const double divisor = rescale_divisor(inst);
  if (!(divisor > 0.0) || !std::isfinite(divisor)) {
    throw DegenerateError("rescaling divisor is zero: the objective has no nonzero terms");
  }
  if (std::abs(divisor - 1.0) <= 1e-12) return {inst, 1.0};
  ProblemInstance out = inst;
  if (auto* mc = std::get_if<MaxCutInstance>(&out)) {
    for (Edge& e : mc->edges) e.w /= divisor;
  } else {
    auto& po = std::get<PortfolioInstance>(out);
    // Scaling q and mu by the same factor scales every Ising coefficient.
    po.q /= divisor;
    for (double& m : po.mu) m /= divisor;
  }
  return {std::move(out), divisor};
}

SpectrumExtremes spectrum_extremes(const DiagonalHamiltonian& h, std::optional<int> weight,
                                   int max_qubits) {
  check_capacity(h.n, max_qubits);
  if (h.energies.size() != (std::size_t{1} << h.n)) {
    throw DimensionError("Hamiltonian length does not match 2^n");
  }
  if (weight && (*weight < 0 || *weight > h.n)) {
    throw ArgumentError("Hamming weight " + std::to_string(*weight) + " out of range");
  }
  SpectrumExtremes out;
  out.feasible_only = weight.has_value();
  bool found = false;
  for (std::size_t x = 0; x < h.energies.size(); ++x) {
    if (weight && hamming_weight(x) != *weight) continue;
    const double e = h.energies[x];
    if (!found) {
      out.f_min = out.f_max = e;
      out.argmin = out.argmax = x;
      found = true;
      continue;
    }
    if (e < out.f_min) {
      out.f_min = e;
      out.argmin = x;
    }
    if (e > out.f_max) {
      out.f_max = e;
      out.argmax = x;
    }
  }
  return out;
}

MaxCutInstance generate_regular_graph(int n, int degree, std::uint64_t seed) {
  if (n < degree + 1 || (static_cast<long>(n) * degree) % 2 != 0) {
    throw ArgumentError("no simple " + std::to_string(degree) + "-regular graph on " +
                        std::to_string(n) + " vertices");
  }
  std::mt19937_64 rng(seed);
  std::vector<int> stubs;
  for (int v = 0; v < n; ++v) stubs.insert(stubs.end(), degree, v);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<int, int>> seen;
    bool ok = true;
    for (std::size_t k = 0; k < stubs.size(); k += 2) {
      auto [a, b] = std::minmax(stubs[k], stubs[k + 1]);
      if (a == b || !seen.insert({a, b}).second) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    MaxCutInstance g;
    g.n = n;
    for (auto [a, b] : seen) g.edges.push_back({a, b, 1.0});
    return g;
  }
  throw Error("configuration model failed to produce a simple graph");
}

MaxCutInstance generate_maxcut_instance(int n, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0) {
    throw ArgumentError("3-regular graphs need an even n >= 4, got " + std::to_string(n));
  }
  MaxCutInstance g = generate_regular_graph(n, 3, seed);
  std::mt19937_64 rng(derive_seed(seed, {1}));
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Edge& e : g.edges) {
    const double u = pick(rng);
    const double z = normal(rng);
    if (u < 0.5) {
      e.w = z;
    } else if (u < 0.8) {
      e.w = 5.0 + std::sqrt(2.0) * z;
    } else {
      e.w = 10.0 + z;
    }
  }
  return g;
}

MaxCutInstance generate_sk_instance(int n, std::uint64_t seed) {
  if (n < 2) throw ArgumentError("SK instance needs n >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MaxCutInstance g;
  g.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j, normal(rng)});
  }
  return g;
}

PortfolioInstance generate_po_instance(int n, std::uint64_t seed) {
  if (n < 2) throw ArgumentError("portfolio instance needs n >= 2");
  constexpr int kFactors = 3;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> diag(0.1, 1.0);
  std::vector<double> f(static_cast<std::size_t>(n) * kFactors);
  for (double& v : f) v = normal(rng);
  PortfolioInstance po;
  po.n = n;
  po.q = 0.5;
  po.budget = n / 2;
  po.sigma.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < kFactors; ++k) s += f[i * kFactors + k] * f[j * kFactors + k];
      po.sigma[static_cast<std::size_t>(i) * n + j] = s;
    }
  }
  for (int i = 0; i < n; ++i) po.sigma[static_cast<std::size_t>(i) * n + i] += diag(rng);
  po.mu.resize(n);
  for (double& m : po.mu) m = 0.1 * normal(rng);
  return po;
}

PortfolioInstance portfolio_from_returns(const std::vector<std::vector<double>>& rows,
                                         int budget, double q) {
  if (rows.size() < 2) {
    throw ArgumentError("need at least 2 return periods to estimate a covariance, got " +
                        std::to_string(rows.size()));
  }
  const int n = static_cast<int>(rows.front().size());
  const double t = static_cast<double>(rows.size());
  PortfolioInstance po;
  po.n = n;
  po.q = q;
  po.budget = budget;
  po.mu.assign(n, 0.0);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n) throw ArgumentError("ragged return matrix");
    for (int i = 0; i < n; ++i) po.mu[i] += r[i];
  }
  for (double& m : po.mu) m /= t;
  po.sigma.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (const auto& r : rows) s += (r[i] - po.mu[i]) * (r[j] - po.mu[j]);
      s /= (t - 1.0);
      po.sigma[static_cast<std::size_t>(i) * n + j] = s;
      po.sigma[static_cast<std::size_t>(j) * n + i] = s;
    }
  }
  po.validate();
  return po;
}

PortfolioInstance load_po_from_csv(const std::filesystem::path& path, int n, int budget,
                                   double q) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": missing header row");
  const auto header_cols = std::count(line.begin(), line.end(), ',') + 1;
  if (header_cols < n) {
    throw ParseError(path.string() + ": header has " + std::to_string(header_cols) +
                     " columns, need " + std::to_string(n));
  }
  std::vector<std::vector<double>> rows;
  int row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::size_t start = 0;
    int col = 0;
    while (col < n) {
      ++col;
      if (start > line.size()) {
        throw ParseError(path.string() + ": row " + std::to_string(row_no) + " column " +
                         std::to_string(col) + ": missing value");
      }
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      std::string_view cell(line.data() + start, end - start);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(value)) {
        throw ParseError(path.string() + ": row " + std::to_string(row_no) + " column " +
                         std::to_string(col) + ": cannot parse '" + std::string(cell) + "'");
      }
      row.push_back(value);
      start = end + 1;
    }
    rows.push_back(std::move(row));
  }
  return portfolio_from_returns(rows, budget, q);
}

}  // namespace qaoa
