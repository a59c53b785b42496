// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qem {

enum class PauliOp : uint8_t { I, X, Y, Z };

char pauli_char(PauliOp p);
PauliOp pauli_from_char(char c);

/// Pauli string over `width` qubits; element q acts on qubit q.
using PauliString = std::vector<PauliOp>;

std::string pauli_string_text(const PauliString& s);
PauliString pauli_string_from_text(const std::string& text);

/// Hermitian observable c*I + sum_k coeff_k * P_k with every P_k a
/// non-identity Pauli string, so the Pauli part is traceless and c fixes
/// tr(O)/2^n.
struct Observable {
  int width = 0;
  double constant = 0.0;
  std::vector<std::pair<double, PauliString>> terms;

  explicit Observable(int width, double constant = 0.0);

  void add_term(double coeff, const PauliString& s);

  /// Dense matrix, for oracle checks. Throws above max_width.
  Eigen::MatrixXcd dense(int max_width = 12) const;
};

}  // namespace qem
