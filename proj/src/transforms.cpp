// SPDX-License-Identifier: Apache-2.0
#include "qem/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "qem/rng.hpp"

namespace qem {

using cd = std::complex<double>;

const std::array<TwirlAssignment, 16>& twirl_table() {
  using P = PauliOp;
  static const std::array<TwirlAssignment, 16> table = {{
      {P::I, P::I, P::I, P::I},
      {P::Y, P::I, P::Y, P::X},
      {P::X, P::I, P::X, P::X},
      {P::Z, P::I, P::Z, P::I},
      {P::I, P::X, P::I, P::X},
      {P::Y, P::X, P::Y, P::I},
      {P::X, P::X, P::X, P::I},
      {P::Z, P::X, P::Z, P::X},
      {P::I, P::Y, P::Z, P::Y},
      {P::Y, P::Y, P::X, P::Z},
      {P::X, P::Y, P::Y, P::Z},
      {P::Z, P::Y, P::I, P::Y},
      {P::I, P::Z, P::Z, P::Z},
      {P::Y, P::Z, P::X, P::Y},
      {P::X, P::Z, P::Y, P::Y},
      {P::Z, P::Z, P::I, P::Z},
  }};
  return table;
}

Eigen::Matrix2cd pauli_matrix(PauliOp p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case PauliOp::I:
      return Eigen::Matrix2cd::Identity();
    case PauliOp::X:
      m << 0, 1, 1, 0;
      return m;
    case PauliOp::Y:
      m << cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0);
      return m;
    case PauliOp::Z:
      m << 1, 0, 0, -1;
      return m;
  }
  throw std::invalid_argument("unknown pauli op");
}

FoldFactor::FoldFactor(int value) : value_(value) {
  if (value != 1 && value != 3 && value != 5)
    throw std::invalid_argument(
        fmt::format("fold factor must be 1, 3 or 5, got {}", value));
}

namespace {

bool is_identity_up_to_phase(const Eigen::Matrix2cd& m) {
  if (std::abs(m(1, 0)) > 1e-14 || std::abs(m(0, 1)) > 1e-14) return false;
  return std::abs(m(0, 0) - m(1, 1)) < 1e-14;
}

}  // namespace

Circuit randomized_compile(const Circuit& c, uint64_t seed) {
  const int n = c.width();
  Circuit out(n);
  std::vector<Eigen::Matrix2cd> pend(n, Eigen::Matrix2cd::Identity());
  std::vector<char> dirty(n, 0);
  std::mt19937_64 rng(seed);

  auto flush = [&](int q) {
    if (!dirty[q]) return;
    if (!is_identity_up_to_phase(pend[q])) {
      const auto a = euler_zyz(pend[q]);
      out.append(Gate::u3(q, a[0], a[1], a[2]));
    }
    pend[q].setIdentity();
    dirty[q] = 0;
  };

  for (const auto& g : c.gates()) {
    if (!g.is_cnot()) {
      if (g.kind == GateKind::I) continue;
      const int q = g.qubits[0];
      pend[q] = Eigen::Matrix2cd(g.unitary()) * pend[q];
      dirty[q] = 1;
      continue;
    }
    const TwirlAssignment& t = twirl_table()[rng() & 15];
    const int ctrl = g.control(), tgt = g.target();
    if (t.r != PauliOp::I) {
      pend[ctrl] = pauli_matrix(t.r) * pend[ctrl];
      dirty[ctrl] = 1;
    }
    if (t.s != PauliOp::I) {
      pend[tgt] = pauli_matrix(t.s) * pend[tgt];
      dirty[tgt] = 1;
    }
    flush(ctrl);
    flush(tgt);
    out.append(g);
    if (t.p != PauliOp::I) {
      pend[ctrl] = pauli_matrix(t.p);
      dirty[ctrl] = 1;
    }
    if (t.q != PauliOp::I) {
      pend[tgt] = pauli_matrix(t.q);
      dirty[tgt] = 1;
    }
  }
  for (int q = 0; q < n; ++q) flush(q);
  return out;
}

Circuit fold_cnots(const Circuit& c, FoldFactor factor) {
  Circuit out(c.width());
  for (const auto& g : c.gates()) {
    if (g.is_cnot()) {
      for (int i = 0; i < factor.value(); ++i) out.append(g);
    } else {
      out.append(g);
    }
  }
  return out;
}

Circuit derive_estimation_circuit(const Circuit& target, uint64_t seed) {
  const int n = target.width();
  Circuit out(n);
  std::mt19937_64 rng(seed);

  // Haar-like random rotations: cos^2(theta/2) uniform, phases uniform.
  std::vector<std::array<double, 3>> first(n);
  constexpr double tau = 2.0 * std::numbers::pi;
  for (int q = 0; q < n; ++q) {
    const double theta = 2.0 * std::asin(std::sqrt(uniform01(rng)));
    const double phi = tau * uniform01(rng);
    const double lambda = tau * uniform01(rng);
    first[q] = {theta, phi, lambda};
    out.append(Gate::u3(q, theta, phi, lambda));
  }
  for (const auto& g : target.gates())
    if (g.is_cnot()) out.append(g);
  for (int q = 0; q < n; ++q) {
    const auto& a = first[q];
    out.append(Gate::u3(q, -a[0], -a[2], -a[1]));
  }
  return out;
}

}  // namespace qem
