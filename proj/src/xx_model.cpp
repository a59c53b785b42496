// SPDX-License-Identifier: Apache-2.0
#include "qem/xx_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "qem/simulator.hpp"

namespace qem {

void ModelParams::validate() const {
  if (sites < 2) throw std::invalid_argument("chain needs at least 2 sites");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("dt must be positive");
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  if (!std::isfinite(coupling))
    throw std::invalid_argument("coupling not finite");
}

Observable build_hamiltonian(const ModelParams& params) {
  params.validate();
  const int n = params.sites;
  Observable h(n, 0.0);
  for (int b = 0; b + 1 < n; ++b) {
    PauliString xx(n, PauliOp::I), yy(n, PauliOp::I);
    xx[b] = PauliOp::X;
    xx[b + 1] = PauliOp::X;
    yy[b] = PauliOp::Y;
    yy[b + 1] = PauliOp::Y;
    h.add_term(-params.coupling, xx);
    h.add_term(-params.coupling, yy);
  }
  return h;
}

void append_xxyy(Circuit& c, int a, int b, double theta) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  // exp(-i theta (XX+YY)) via conjugation of exp(-i theta (ZZ+XX)), which two
  // CNOTs reduce to single-qubit rotations on the pair.
  for (int q : {a, b}) {
    c.append(Gate::h(q));
    c.append(Gate::rz(q, half_pi));
  }
  c.append(Gate::cnot(b, a));
  c.append(Gate::rz(a, 2.0 * theta));
  c.append(Gate::rx(b, 2.0 * theta));
  c.append(Gate::cnot(b, a));
  for (int q : {a, b}) {
    c.append(Gate::rz(q, -half_pi));
    c.append(Gate::h(q));
  }
}

Circuit xxyy_block(double theta) {
  Circuit c(2);
  append_xxyy(c, 0, 1, theta);
  return c;
}

namespace {

void bond_layer(Circuit& c, int n, int first_bond, double theta) {
  for (int b = first_bond; b + 1 < n; b += 2) append_xxyy(c, b, b + 1, theta);
}

}  // namespace

Circuit trotter_circuit(const ModelParams& params) {
  params.validate();
  const int n = params.sites;
  Circuit c(n);
  if (params.steps == 0) return c;

  // Block angle carries the sign of Eq-style H = -J(XX+YY): one full bond
  // evolution over dt is exp(+i J dt (XX+YY)) = block(-J dt).
  const double full = -params.coupling * params.dt;
  const double half = full / 2.0;

  if (params.merge_half_steps) {
    bond_layer(c, n, 0, half);
    for (int s = 0; s < params.steps; ++s) {
      bond_layer(c, n, 1, full);
      if (s + 1 < params.steps) bond_layer(c, n, 0, full);
    }
    bond_layer(c, n, 0, half);
  } else {
    for (int s = 0; s < params.steps; ++s) {
      bond_layer(c, n, 0, half);
      bond_layer(c, n, 1, full);
      bond_layer(c, n, 0, half);
    }
  }
  return c;
}

Circuit domain_wall_prep(int sites) {
  if (sites < 1) throw std::invalid_argument("need at least one site");
  Circuit c(sites);
  const int ones = (sites + 1) / 2;
  for (int q = 0; q < ones; ++q) c.append(Gate::x(q));
  return c;
}

Observable magnetization_observable(int sites) {
  if (sites < 1) throw std::invalid_argument("need at least one site");
  Observable o(sites, 0.0);
  PauliString s(sites, PauliOp::I);
  s[sites - 1] = PauliOp::Z;
  o.add_term(1.0, s);
  return o;
}

double exact_magnetization(const ModelParams& params, double t,
                           bool trotterized, int max_width) {
  params.validate();
  const int n = params.sites;
  if (n > max_width)
    throw std::invalid_argument(
        fmt::format("chain length {} exceeds dense cap {}", n, max_width));
  const Observable mz = magnetization_observable(n);

  if (trotterized) {
    const double ratio = t / params.dt;
    const long long k = std::llround(ratio);
    if (k < 0 || std::abs(ratio - static_cast<double>(k)) > 1e-9)
      throw std::invalid_argument(
          fmt::format("t = {} is not a whole number of dt = {} steps", t,
                      params.dt));
    ModelParams p = params;
    p.steps = static_cast<int>(k);
    Circuit c(n);
    c.extend(domain_wall_prep(n));
    c.extend(trotter_circuit(p));
    return expectation(simulate_statevector(c, max_width), mz);
  }

  const Eigen::MatrixXcd h = build_hamiltonian(params).dense(max_width);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const size_t dim = size_t{1} << n;
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
  psi0((uint64_t{1} << ((n + 1) / 2)) - 1) = 1.0;  // |1...10...0>
  const Eigen::VectorXcd coeff = es.eigenvectors().adjoint() * psi0;
  Eigen::VectorXcd evolved(dim);
  for (Eigen::Index i = 0; i < coeff.size(); ++i)
    evolved(i) =
        coeff(i) * std::polar(1.0, -es.eigenvalues()(i) * t);
  StateVector psi;
  psi.width = n;
  psi.amp = es.eigenvectors() * evolved;
  return expectation(psi, mz);
}

}  // namespace qem
