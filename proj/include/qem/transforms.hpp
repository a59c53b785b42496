// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "qem/circuit.hpp"
#include "qem/observable.hpp"

namespace qem {

/// One row of the CNOT twirl table: (P (x) Q) CNOT (R (x) S) = +/- CNOT,
/// with P and R on the control, Q and S on the target. In circuit time order
/// R, S come before the CNOT and P, Q after it.
struct TwirlAssignment {
  PauliOp p, q, r, s;
  bool operator==(const TwirlAssignment&) const = default;
};

/// The 16 assignments that leave CNOT invariant up to sign.
const std::array<TwirlAssignment, 16>& twirl_table();

Eigen::Matrix2cd pauli_matrix(PauliOp p);

/// CNOT fold factor; only 1, 3 and 5 are meaningful to the extrapolation.
class FoldFactor {
 public:
  explicit FoldFactor(int value);
  int value() const { return value_; }

 private:
  int value_;
};

/// Pauli-twirl every CNOT with a seeded uniform table row, merging all
/// single-qubit gates (original ones and twirl Paulis alike) into U3 gates.
/// The result equals the input unitary up to global phase and has the same
/// CNOT count.
Circuit randomized_compile(const Circuit& c, uint64_t seed);

/// Replace every CNOT by `factor` consecutive copies. Intended to run after
/// randomized_compile so the copies see independent Pauli frames only at the
/// next twirl, matching how noise is amplified on hardware.
Circuit fold_cnots(const Circuit& c, FoldFactor factor);

/// Noise-estimation companion: keep the CNOT skeleton of the target, drop all
/// its single-qubit gates, and sandwich it between a seeded layer of random
/// rotations and the exact inverse layer. When the skeleton composes to
/// identity the ideal output is |0...0>.
Circuit derive_estimation_circuit(const Circuit& target, uint64_t seed);

}  // namespace qem
