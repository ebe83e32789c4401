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

// Dense statevector simulation of p-layer QAOA circuits.
//
// The apply_* kernels mutate their StateVector argument in place; run_qaoa
// returns a fresh state.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qaoa/problems.hpp"

namespace qaoa {

using Complex = std::complex<double>;

class StateVector {
 public:
  StateVector() = default;
  /// Throws DimensionError unless amps.size() == 2^n.
  StateVector(int n, std::vector<Complex> amps);

  static StateVector basis(int n, Bitstring x);

  int num_qubits() const { return n_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  const Complex& operator[](std::size_t x) const { return amps_[x]; }

  double norm_squared() const;
  std::vector<double> probabilities() const;

 private:
  int n_ = 0;
  std::vector<Complex> amps_;
};

struct QaoaParams {
  std::vector<double> gamma;
  std::vector<double> beta;

  int depth() const { return static_cast<int>(gamma.size()); }
  /// Equal lengths, p >= 1, all finite; throws ArgumentError otherwise.
  void validate() const;
  bool operator==(const QaoaParams&) const = default;
};

struct TransverseX {
  bool operator==(const TransverseX&) const = default;
};

/// Ring of XX+YY couplings (0,1),(1,2),...,(n-1,0), Trotterized.
struct XYRing {
  int trotter_reps = 1;
  bool operator==(const XYRing&) const = default;
};

using MixerKind = std::variant<TransverseX, XYRing>;

/// TransverseX for MaxCut, XYRing{1} for portfolios.
MixerKind default_mixer(const ProblemInstance& inst);

StateVector prepare_plus_state(int n, int max_qubits = kDefaultMaxQubits);
/// Equal superposition of all weight-K bitstrings; requires 1 <= K <= n-1.
StateVector prepare_dicke_state(int n, int k, int max_qubits = kDefaultMaxQubits);

void apply_phase_separator(StateVector& sv, const DiagonalHamiltonian& h, double gamma);
/// exp(-i beta X) on every qubit.
void apply_x_mixer(StateVector& sv, double beta);
/// exp(-i angle (X_i X_j + Y_i Y_j)) on one pair. Acts on the span of |01>,|10>
/// as a rotation by 2*angle and leaves |00>,|11> untouched.
void apply_xy_pair(StateVector& sv, int i, int j, double angle);
/// trotter_reps sweeps over the ring pairs with angle beta / trotter_reps.
void apply_xy_ring_mixer(StateVector& sv, double beta, int trotter_reps = 1);
void apply_mixer(StateVector& sv, const MixerKind& mixer, double beta);

/// A problem Hamiltonian paired with its mixer and initial state. The initial
/// state is |+>^n when `hamming_weight` is empty and Dicke(n, K) otherwise.
struct QaoaCircuit {
  DiagonalHamiltonian hamiltonian;
  MixerKind mixer;
  std::optional<int> hamming_weight;
};

/// Rejects MaxCut with an XY mixer and portfolios with the X mixer.
QaoaCircuit make_circuit(const ProblemInstance& inst, const MixerKind& mixer,
                         int max_qubits = kDefaultMaxQubits);
QaoaCircuit make_circuit(const ProblemInstance& inst, int max_qubits = kDefaultMaxQubits);

StateVector initial_state(const QaoaCircuit& circuit);
StateVector run_qaoa(const QaoaCircuit& circuit, const QaoaParams& params);
StateVector run_qaoa(const ProblemInstance& inst, const QaoaParams& params,
                     const MixerKind& mixer);

double expectation_energy(const StateVector& sv, const DiagonalHamiltonian& h);
double energy_std(const StateVector& sv, const DiagonalHamiltonian& h);

struct EnergyMoments {
  double mean = 0.0;
  double std = 0.0;
};
EnergyMoments energy_moments(const StateVector& sv, const DiagonalHamiltonian& h);

/// i.i.d. draws from |amps|^2 by inverse CDF; deterministic given seed.
std::vector<Bitstring> sample_bitstrings(const StateVector& sv, int shots, std::uint64_t seed);

}  // namespace qaoa
