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

// Problem instances (weighted MaxCut, cardinality-constrained portfolio
// optimization), their diagonal Hamiltonians, weight rescaling, brute-force
// spectrum extremes, and instance generators.
//
// Bit-order convention used throughout the library: bitstring index x is
// little-endian, bit i of x belongs to vertex/asset/qubit i.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qaoa {

inline constexpr int kDefaultMaxQubits = 24;

using Bitstring = std::uint64_t;

inline int hamming_weight(Bitstring x) { return __builtin_popcountll(x); }

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

struct MaxCutInstance {
  int n = 0;
  std::vector<Edge> edges;

  /// Throws ArgumentError on out-of-range or self-loop endpoints, duplicate
  /// undirected edges, non-finite weights, or n < 2.
  void validate() const;
};

struct PortfolioInstance {
  int n = 0;
  std::vector<double> mu;
  std::vector<double> sigma;  // row-major n x n
  double q = 0.5;
  int budget = 1;  // K, the required number of selected assets

  double cov(int i, int j) const { return sigma[static_cast<std::size_t>(i) * n + j]; }
  void validate() const;
};

using ProblemInstance = std::variant<MaxCutInstance, PortfolioInstance>;

enum class ProblemKind { MaxCut, Portfolio };

ProblemKind kind_of(const ProblemInstance& inst);
int num_qubits(const ProblemInstance& inst);
/// Hamming weight of feasible solutions (portfolio only).
std::optional<int> feasible_weight(const ProblemInstance& inst);

/// energies[x] is the classical objective of bitstring x: the cut value for
/// MaxCut, f(x) = q x'Sx - mu'x for portfolios. `offset` records the constant
/// folded into the energies relative to the Ising form (informational).
struct DiagonalHamiltonian {
  int n = 0;
  std::vector<double> energies;
  double offset = 0.0;

  std::size_t dimension() const { return energies.size(); }
};

DiagonalHamiltonian build_maxcut_hamiltonian(const MaxCutInstance& inst,
                                             int max_qubits = kDefaultMaxQubits);
DiagonalHamiltonian build_po_hamiltonian(const PortfolioInstance& inst,
                                         int max_qubits = kDefaultMaxQubits);
DiagonalHamiltonian build_hamiltonian(const ProblemInstance& inst,
                                      int max_qubits = kDefaultMaxQubits);

/// Pauli-Z expansion of an objective: sum quadratic w_ij Z_i Z_j
/// + sum linear h_i Z_i + constant.
struct IsingForm {
  struct Quadratic {
    int i;
    int j;
    double w;
  };
  struct Linear {
    int i;
    double h;
  };
  std::vector<Quadratic> quadratic;
  std::vector<Linear> linear;
  double constant = 0.0;

  double evaluate(Bitstring x) const;
};

/// x_i -> (1 - Z_i)/2 substitution of the portfolio objective. Terms with an
/// exactly zero coefficient are omitted.
IsingForm portfolio_ising_form(const PortfolioInstance& inst);

/// Root of the mean squared quadratic coefficient plus the mean squared
/// linear coefficient (a term is dropped when its family is empty). MaxCut
/// uses the edge weights; portfolios use the Z_iZ_j and Z_i coefficients of
/// portfolio_ising_form.
double rescale_divisor(const ProblemInstance& inst);

struct RescaledInstance {
  ProblemInstance instance;
  double divisor = 1.0;
};

/// Divides every objective coefficient by rescale_divisor. A divisor within
/// 1e-12 of one leaves the instance bitwise unchanged, which makes the
/// operation exactly idempotent. Throws DegenerateError if the divisor is 0.
RescaledInstance rescale_instance(const ProblemInstance& inst);

struct SpectrumExtremes {
  double f_min = 0.0;
  double f_max = 0.0;
  Bitstring argmin = 0;
  Bitstring argmax = 0;
  bool feasible_only = false;
};

/// Exhaustive scan. With `weight` set, only bitstrings of that Hamming weight
/// are considered. Ties go to the smallest bitstring index.
SpectrumExtremes spectrum_extremes(const DiagonalHamiltonian& h,
                                   std::optional<int> weight = std::nullopt,
                                   int max_qubits = kDefaultMaxQubits);

/// Random simple 3-regular graph (configuration model with rejection) with
/// edge weights from the Gaussian mixture 0.5 N(0,1) + 0.3 N(5,2) + 0.2 N(10,1)
/// (second parameter is the variance).
MaxCutInstance generate_maxcut_instance(int n, std::uint64_t seed);

/// Unweighted random 3-regular graph.
MaxCutInstance generate_regular_graph(int n, int degree, std::uint64_t seed);

/// Sherrington-Kirkpatrick couplings on the complete graph, J_ij ~ N(0, 1).
MaxCutInstance generate_sk_instance(int n, std::uint64_t seed);

/// Synthetic market: Sigma = F F' + diag(d) with an n x 3 standard-normal F and
/// d ~ U(0.1, 1); mu ~ 0.1 N(0, 1); q = 0.5; K = floor(n / 2).
PortfolioInstance generate_po_instance(int n, std::uint64_t seed);

/// Sample mean and (n-1)-normalized sample covariance of per-period returns.
/// rows[t][i] is the return of asset i in period t.
PortfolioInstance portfolio_from_returns(const std::vector<std::vector<double>>& rows,
                                         int budget, double q);

/// CSV: a header row of asset names, then one row of decimal returns per
/// period. The first `n` columns are used.
PortfolioInstance load_po_from_csv(const std::filesystem::path& path, int n, int budget,
                                   double q);

}  // namespace qaoa
