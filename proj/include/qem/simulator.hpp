// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qem/circuit.hpp"
#include "qem/observable.hpp"
#include "qem/readout.hpp"

namespace qem {

/// Noise applied by simulate_density. After each CNOT: a coherent ZX
/// over-rotation exp(-i a/2 Z_ctrl X_tgt) with a = coherent_angle, then
/// two-qubit depolarizing with probability cnot_depolarizing on the CNOT pair.
/// After the last gate: depolarizing on all qubits with probability
/// global_depolarizing. Readout confusion only affects sampling and
/// distribution corruption, never the density matrix itself.
struct NoiseModel {
  double cnot_depolarizing = 0.0;
  double coherent_angle = 0.0;
  double global_depolarizing = 0.0;
  ConfusionMatrix readout;

  bool ideal() const;
  void validate() const;
};

struct DensityMatrix {
  int width = 0;
  Eigen::MatrixXcd mat;

  static DensityMatrix zero_state(int width);
  double purity() const;  // tr(rho^2)
  /// Checks Hermiticity and unit trace within tol, eigenvalues >= -eig_tol.
  void validate(double tol = 1e-12, double eig_tol = 1e-10) const;
};

struct StateVector {
  int width = 0;
  Eigen::VectorXcd amp;

  static StateVector zero_state(int width);
};

/// Measurement record. Outcome keys use qubit q as bit q of the integer.
struct CountHistogram {
  int width = 0;
  uint64_t shots = 0;
  std::map<uint64_t, uint64_t> counts;

  std::vector<double> distribution() const;  // frequencies, length 2^width
};

/// Bitstring form of an outcome: character i is qubit i.
std::string outcome_bits(uint64_t outcome, int width);
uint64_t outcome_from_bits(const std::string& bits);

void apply_gate(DensityMatrix& rho, const Gate& g);
void apply_gate(StateVector& psi, const Gate& g);

/// rho -> (1-p) rho + p * Tr_S(rho) (x) I/2^|S| on the subset S of qubits.
void apply_depolarizing(DensityMatrix& rho, std::span<const int> qubits,
                        double p);

/// Coherent CNOT error: exp(-i angle/2 * Z_ctrl X_tgt).
void apply_coherent_zx(DensityMatrix& rho, int control, int target,
                       double angle);

DensityMatrix simulate_density(const Circuit& c, const NoiseModel& noise,
                               int max_width = 10);
StateVector simulate_statevector(const Circuit& c, int max_width = 20);

double expectation(const DensityMatrix& rho, const Observable& obs);
double expectation(const StateVector& psi, const Observable& obs);

/// Expectation of an observable against an outcome distribution; every term
/// must be diagonal (I/Z only).
double expectation(const std::vector<double>& dist, const Observable& obs);

/// Diagonal of rho as probabilities: negatives clipped to zero, renormalized.
std::vector<double> outcome_distribution(const DensityMatrix& rho);

/// Draw shots from the distribution of rho, then flip each bit through the
/// confusion matrix. Deterministic for a fixed seed.
CountHistogram sample_counts(const DensityMatrix& rho, uint64_t shots,
                             const ConfusionMatrix& readout, uint64_t seed);

}  // namespace qem
