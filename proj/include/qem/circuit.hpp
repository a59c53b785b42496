// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qem {

enum class GateKind { I, X, Y, Z, H, RX, RY, RZ, U3, CNOT };

const char* kind_name(GateKind k);
GateKind kind_from_name(const std::string& name);
int kind_arity(GateKind k);       // number of qubits, 1 or 2
int kind_angle_count(GateKind k); // 0, 1 or 3

/// One gate instance. CNOT stores (control, target); rotations store their
/// angles in radians. U3 angles are (theta, phi, lambda).
struct Gate {
  GateKind kind = GateKind::I;
  std::array<int, 2> qubits{0, 0};
  std::array<double, 3> angles{0.0, 0.0, 0.0};

  static Gate id(int q);
  static Gate x(int q);
  static Gate y(int q);
  static Gate z(int q);
  static Gate h(int q);
  static Gate rx(int q, double angle);
  static Gate ry(int q, double angle);
  static Gate rz(int q, double angle);
  static Gate u3(int q, double theta, double phi, double lambda);
  static Gate cnot(int control, int target);

  int arity() const { return kind_arity(kind); }
  bool is_cnot() const { return kind == GateKind::CNOT; }
  int control() const { return qubits[0]; }
  int target() const { return qubits[1]; }

  /// 2x2 or 4x4 unitary. CNOT convention: qubits[0] is the control and the
  /// matrix acts on basis |q1 q0> with qubits[0] as the least significant bit.
  Eigen::MatrixXcd unitary() const;
  Gate inverse() const;

  bool operator==(const Gate& other) const;
};

/// A circuit is an ordered list of layers; gates within one layer act on
/// disjoint qubits. append() packs greedily: a gate lands in the last layer
/// that leaves its qubits free, so per-qubit worldline order is insertion
/// order.
class Circuit {
 public:
  explicit Circuit(int width);

  int width() const { return width_; }
  int depth() const { return static_cast<int>(layers_.size()); }
  const std::vector<std::vector<Gate>>& layers() const { return layers_; }

  void append(const Gate& g);
  void extend(const Circuit& other);

  int gate_count() const;
  int cnot_count() const;
  std::vector<Gate> gates() const;  // flattened in layer order

  std::string to_text() const;
  static Circuit from_text(const std::string& text);

  bool operator==(const Circuit& other) const;

 private:
  int width_ = 0;
  std::vector<std::vector<Gate>> layers_;
  std::vector<uint64_t> masks_;  // occupied qubits per layer
};

/// Dense unitary of the whole circuit, qubit 0 = least significant bit.
/// Throws if the width exceeds max_width.
Eigen::MatrixXcd circuit_unitary(const Circuit& c, int max_width = 10);

Eigen::Matrix2cd u3_matrix(double theta, double phi, double lambda);

/// ZYZ Euler angles (theta, phi, lambda) with u3_matrix(...) equal to u up to
/// global phase.
std::array<double, 3> euler_zyz(const Eigen::Matrix2cd& u);

/// True if a and b are equal up to a global phase, max-norm tolerance tol.
bool approx_equal_up_to_phase(const Eigen::MatrixXcd& a,
                              const Eigen::MatrixXcd& b, double tol);

}  // namespace qem
