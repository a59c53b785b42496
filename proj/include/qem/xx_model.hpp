// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qem/circuit.hpp"
#include "qem/observable.hpp"

namespace qem {

/// Quenched XX chain H = -J sum_b (X_b X_{b+1} + Y_b Y_{b+1}) with open ends.
struct ModelParams {
  int sites = 6;
  double coupling = 1.0;  // J
  double dt = 0.25;
  int steps = 15;
  bool merge_half_steps = true;

  void validate() const;  // sites >= 2, dt > 0, steps >= 0
};

/// 2(n-1) Pauli terms, coefficient -J each, constant 0.
Observable build_hamiltonian(const ModelParams& params);

/// Two-qubit circuit with exactly 2 CNOTs equal to exp(-i theta (XX + YY)).
Circuit xxyy_block(double theta);

/// Append the same block acting on chain sites a, b of a wider circuit.
void append_xxyy(Circuit& c, int a, int b, double theta);

/// Second-order Trotter evolution circuit (no state preparation). Bonds
/// starting on even sites (0-1, 2-3, ...) form the half-stepped layer F,
/// bonds starting on odd sites form G. With merge_half_steps the
/// back-to-back half layers of consecutive steps fuse into full layers.
Circuit trotter_circuit(const ModelParams& params);

/// X on the first half of the chain: |1...10...0>.
Circuit domain_wall_prep(int sites);

/// sigma_z on the last chain site, constant 0 (traceless).
Observable magnetization_observable(int sites);

/// <sigma_z last> at time t from the domain-wall start. Trotterized mode runs
/// the noiseless statevector through the exact Trotter circuit (t must be an
/// integer multiple of params.dt); continuous mode uses the dense propagator
/// e^{-iHt}.
double exact_magnetization(const ModelParams& params, double t,
                           bool trotterized, int max_width = 12);

}  // namespace qem
