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

#include "qaoa/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qaoa/error.hpp"

namespace qaoa {
namespace {

void check_qubits(int n, int max_qubits) {
  if (n < 1) throw ArgumentError("qubit count must be positive");
  if (n > max_qubits) {
    throw CapacityError(std::to_string(n) + " qubits exceeds the limit of " +
                        std::to_string(max_qubits));
  }
}

void check_match(const StateVector& sv, const DiagonalHamiltonian& h) {
  if (sv.size() != h.energies.size()) {
    throw DimensionError("state has " + std::to_string(sv.size()) +
                         " amplitudes but the Hamiltonian has " +
                         std::to_string(h.energies.size()) + " energies");
  }
}

}  // namespace

StateVector::StateVector(int n, std::vector<Complex> amps) : n_(n), amps_(std::move(amps)) {
  if (n < 0 || n > 62 || amps_.size() != (std::size_t{1} << n)) {
    throw DimensionError("amplitude vector length must be 2^n");
  }
}

StateVector StateVector::basis(int n, Bitstring x) {
  std::vector<Complex> amps(std::size_t{1} << n);
  if (x >= amps.size()) throw ArgumentError("basis index out of range");
  amps[x] = 1.0;
  return StateVector(n, std::move(amps));
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const Complex& a : amps_) s += std::norm(a);
  return s;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  std::transform(amps_.begin(), amps_.end(), p.begin(), [](const Complex& a) { return std::norm(a); });
  return p;
}

void QaoaParams::validate() const {
  if (gamma.size() != beta.size()) throw ArgumentError("gamma and beta lengths differ");
  if (gamma.empty()) throw ArgumentError("QAOA depth must be at least 1");
  for (double v : gamma) {
    if (!std::isfinite(v)) throw ArgumentError("non-finite gamma");
  }
  for (double v : beta) {
    if (!std::isfinite(v)) throw ArgumentError("non-finite beta");
  }
}

MixerKind default_mixer(const ProblemInstance& inst) {
  if (kind_of(inst) == ProblemKind::MaxCut) return TransverseX{};
  return XYRing{1};
}

StateVector prepare_plus_state(int n, int max_qubits) {
  check_qubits(n, max_qubits);
  const std::size_t dim = std::size_t{1} << n;
  return StateVector(n, std::vector<Complex>(dim, Complex(std::pow(2.0, -0.5 * n), 0.0)));
}

StateVector prepare_dicke_state(int n, int k, int max_qubits) {
  check_qubits(n, max_qubits);
  if (k < 1 || k > n - 1) {
    throw ArgumentError("Dicke weight K=" + std::to_string(k) + " outside [1, n-1] for n=" +
                        std::to_string(n));
  }
  const std::size_t dim = std::size_t{1} << n;
  double support = 1.0;
  for (int i = 0; i < k; ++i) support = support * (n - i) / (i + 1);
  const double amp = 1.0 / std::sqrt(support);
  std::vector<Complex> amps(dim);
  for (std::size_t x = 0; x < dim; ++x) {
    if (hamming_weight(x) == k) amps[x] = amp;
  }
  return StateVector(n, std::move(amps));
}

void apply_phase_separator(StateVector& sv, const DiagonalHamiltonian& h, double gamma) {
  check_match(sv, h);
  auto amps = sv.amplitudes();
  for (std::size_t x = 0; x < amps.size(); ++x) {
    const double phase = -gamma * h.energies[x];
    amps[x] *= Complex(std::cos(phase), std::sin(phase));
  }
}

void apply_x_mixer(StateVector& sv, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  auto amps = sv.amplitudes();
  const std::size_t dim = amps.size();
  for (int q = 0; q < sv.num_qubits(); ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t x = base; x < base + stride; ++x) {
        const Complex a0 = amps[x];
        const Complex a1 = amps[x + stride];
        // [[c, -is], [-is, c]]
        amps[x] = Complex(c * a0.real() + s * a1.imag(), c * a0.imag() - s * a1.real());
        amps[x + stride] = Complex(c * a1.real() + s * a0.imag(), c * a1.imag() - s * a0.real());
      }
    }
  }
}

void apply_xy_pair(StateVector& sv, int i, int j, double angle) {
  const int n = sv.num_qubits();
  if (i < 0 || i >= n || j < 0 || j >= n || i == j) {
    throw ArgumentError("invalid XY pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  const double c = std::cos(2.0 * angle);
  const double s = std::sin(2.0 * angle);
  const std::size_t bi = std::size_t{1} << i;
  const std::size_t bj = std::size_t{1} << j;
  auto amps = sv.amplitudes();
  for (std::size_t x = 0; x < amps.size(); ++x) {
    // Visit each (|..0_i..1_j..>, |..1_i..0_j..>) pair once.
    if ((x & bi) || !(x & bj)) continue;
    const std::size_t y = x ^ bi ^ bj;
    const Complex a = amps[x];
    const Complex b = amps[y];
    amps[x] = Complex(c * a.real() + s * b.imag(), c * a.imag() - s * b.real());
    amps[y] = Complex(c * b.real() + s * a.imag(), c * b.imag() - s * a.real());
  }
}

void apply_xy_ring_mixer(StateVector& sv, double beta, int trotter_reps) {
  const int n = sv.num_qubits();
  if (n < 2) throw ArgumentError("XY ring mixer needs at least 2 qubits");
  if (trotter_reps < 1) throw ArgumentError("trotter_reps must be >= 1");
  const double angle = beta / trotter_reps;
  for (int r = 0; r < trotter_reps; ++r) {
    for (int k = 0; k < n; ++k) apply_xy_pair(sv, k, (k + 1) % n, angle);
  }
}

void apply_mixer(StateVector& sv, const MixerKind& mixer, double beta) {
  if (const auto* xy = std::get_if<XYRing>(&mixer)) {
    apply_xy_ring_mixer(sv, beta, xy->trotter_reps);
  } else {
    apply_x_mixer(sv, beta);
  }
}

QaoaCircuit make_circuit(const ProblemInstance& inst, const MixerKind& mixer, int max_qubits) {
  const bool xy = std::holds_alternative<XYRing>(mixer);
  if (kind_of(inst) == ProblemKind::MaxCut && xy) {
    throw ArgumentError("MaxCut instances use the transverse-X mixer");
  }
  if (kind_of(inst) == ProblemKind::Portfolio && !xy) {
    throw ArgumentError("portfolio instances use the XY ring mixer");
  }
  if (xy && std::get<XYRing>(mixer).trotter_reps < 1) {
    throw ArgumentError("trotter_reps must be >= 1");
  }
  return {build_hamiltonian(inst, max_qubits), mixer, feasible_weight(inst)};
}

QaoaCircuit make_circuit(const ProblemInstance& inst, int max_qubits) {
  return make_circuit(inst, default_mixer(inst), max_qubits);
}

StateVector initial_state(const QaoaCircuit& circuit) {
  const int n = circuit.hamiltonian.n;
  if (circuit.hamming_weight) return prepare_dicke_state(n, *circuit.hamming_weight, 62);
  return prepare_plus_state(n, 62);
}

StateVector run_qaoa(const QaoaCircuit& circuit, const QaoaParams& params) {
  params.validate();
  StateVector sv = initial_state(circuit);
  for (int layer = 0; layer < params.depth(); ++layer) {
    apply_phase_separator(sv, circuit.hamiltonian, params.gamma[layer]);
    apply_mixer(sv, circuit.mixer, params.beta[layer]);
  }
  return sv;
}

StateVector run_qaoa(const ProblemInstance& inst, const QaoaParams& params,
                     const MixerKind& mixer) {
  return run_qaoa(make_circuit(inst, mixer), params);
}

EnergyMoments energy_moments(const StateVector& sv, const DiagonalHamiltonian& h) {
  check_match(sv, h);
  const auto amps = sv.amplitudes();
  double mean = 0.0;
  for (std::size_t x = 0; x < amps.size(); ++x) mean += std::norm(amps[x]) * h.energies[x];
  double var = 0.0;
  for (std::size_t x = 0; x < amps.size(); ++x) {
    const double d = h.energies[x] - mean;
    var += std::norm(amps[x]) * d * d;
  }
  return {mean, std::sqrt(std::max(0.0, var))};
}

double expectation_energy(const StateVector& sv, const DiagonalHamiltonian& h) {
  return energy_moments(sv, h).mean;
}

double energy_std(const StateVector& sv, const DiagonalHamiltonian& h) {
  return energy_moments(sv, h).std;
}

std::vector<Bitstring> sample_bitstrings(const StateVector& sv, int shots, std::uint64_t seed) {
  if (shots < 1) throw ArgumentError("shots must be >= 1");
  const auto amps = sv.amplitudes();
  std::vector<double> cdf(amps.size());
  double acc = 0.0;
  for (std::size_t x = 0; x < amps.size(); ++x) {
    acc += std::norm(amps[x]);
    cdf[x] = acc;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, acc);
  std::vector<Bitstring> out(static_cast<std::size_t>(shots));
  for (auto& b : out) {
    const double u = uniform(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // upper_bound never lands on a zero-probability entry.
    if (it == cdf.end()) --it;
    b = static_cast<Bitstring>(it - cdf.begin());
  }
  return out;
}

}  // namespace qaoa
