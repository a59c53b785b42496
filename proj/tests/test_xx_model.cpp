// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qem/simulator.hpp"
#include "qem/xx_model.hpp"
#include "support/reference.hpp"

using namespace qem;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

Observable total_z(int n) {
  Observable obs(n);
  for (int q = 0; q < n; ++q) {
    PauliString s(n, PauliOp::I);
    s[q] = PauliOp::Z;
    obs.add_term(1.0, s);
  }
  return obs;
}

}  // namespace

TEST_CASE("model parameter validation") {
  ModelParams p;
  p.validate();
  p.sites = 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.sites = 6;
  p.dt = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.dt = 0.25;
  p.steps = -1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("hamiltonian terms and symmetry") {
  const ModelParams params{.sites = 6, .coupling = 1.3};
  const Observable h = build_hamiltonian(params);
  CHECK(h.width == 6);
  CHECK(h.constant == 0.0);
  CHECK(h.terms.size() == 10);
  for (const auto& [coeff, s] : h.terms)
    CHECK(coeff == doctest::Approx(-1.3));

  const MatrixXcd dense = ref::observable_matrix(h);
  CHECK((dense - dense.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  const MatrixXcd tz = ref::observable_matrix(total_z(6));
  CHECK((dense * tz - tz * dense).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("xxyy block equals the exact bond propagator including phase") {
  for (double theta : {-0.8, -0.25, 0.0, 0.3, 1.1}) {
    const Circuit block = xxyy_block(theta);
    CHECK(block.width() == 2);
    CHECK(block.cnot_count() == 2);
    Observable bond(2);
    bond.add_term(1.0, {PauliOp::X, PauliOp::X});
    bond.add_term(1.0, {PauliOp::Y, PauliOp::Y});
    const MatrixXcd gen = ref::observable_matrix(bond);
    const MatrixXcd want =
        (std::complex<double>(0.0, -theta) * gen).exp();
    CHECK((circuit_unitary(block) - want).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("xxyy block leaves aligned pairs alone") {
  const MatrixXcd u = circuit_unitary(xxyy_block(0.7));
  CHECK(std::abs(u(0, 0) - std::complex<double>(1, 0)) < 1e-12);
  CHECK(std::abs(u(3, 3) - std::complex<double>(1, 0)) < 1e-12);
}

TEST_CASE("append_xxyy embeds the block on the right pair") {
  Circuit c(4);
  append_xxyy(c, 1, 2, 0.4);
  const MatrixXcd got = ref::circuit_matrix(c);
  const int qs[2] = {1, 2};
  const MatrixXcd want = ref::embed(circuit_unitary(xxyy_block(0.4)), qs, 4);
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("merged and unmerged trotter circuits act identically") {
  for (int steps : {1, 2, 5}) {
    ModelParams merged{.sites = 5, .dt = 0.3, .steps = steps};
    ModelParams plain = merged;
    plain.merge_half_steps = false;
    Circuit cm = domain_wall_prep(5);
    cm.extend(trotter_circuit(merged));
    Circuit cp = domain_wall_prep(5);
    cp.extend(trotter_circuit(plain));
    const StateVector a = simulate_statevector(cm);
    const StateVector b = simulate_statevector(cp);
    CHECK((a.amp - b.amp).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("cnot counts follow the layer structure") {
  for (int steps : {1, 3, 7}) {
    ModelParams merged{.sites = 6, .steps = steps};
    ModelParams plain = merged;
    plain.merge_half_steps = false;
    CHECK(trotter_circuit(merged).cnot_count() == 10 * steps + 6);
    CHECK(trotter_circuit(plain).cnot_count() == 16 * steps);
  }
  CHECK(trotter_circuit(ModelParams{.sites = 6, .steps = 0}).cnot_count() == 0);
}

TEST_CASE("domain wall prep fills the low half of the chain") {
  const Circuit prep = domain_wall_prep(6);
  const StateVector psi = simulate_statevector(prep);
  CHECK(std::abs(psi.amp(0b000111)) == doctest::Approx(1.0));
  const Circuit odd = domain_wall_prep(5);
  const StateVector psi5 = simulate_statevector(odd);
  CHECK(std::abs(psi5.amp(0b00111)) == doctest::Approx(1.0));
}

TEST_CASE("magnetization observable reads the last site") {
  const Observable m = magnetization_observable(6);
  CHECK(m.width == 6);
  CHECK(m.constant == 0.0);
  REQUIRE(m.terms.size() == 1);
  CHECK(pauli_string_text(m.terms[0].second) == "IIIIIZ");
}

TEST_CASE("total magnetization is conserved by the evolution") {
  const ModelParams params{.sites = 6, .steps = 7};
  Circuit c = domain_wall_prep(params.sites);
  c.extend(trotter_circuit(params));
  const StateVector psi = simulate_statevector(c);
  CHECK(expectation(psi, total_z(6)) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("trotterized magnetization reproduces the frozen table") {
  const double table[16] = {1.0,     0.9983,  0.9543,  0.7032,
                            0.121,   -0.5459, -0.8992, -0.9149,
                            -0.8571, -0.8349, -0.7803, -0.6106,
                            -0.2291, 0.3201,  0.716,   0.7295};
  ModelParams params;
  for (int k = 0; k < 16; ++k) {
    const double m = exact_magnetization(params, 0.25 * k, true);
    CHECK(std::abs(m - table[k]) < 6e-5);
  }
  // Two high-precision pins.
  CHECK(exact_magnetization(params, 0.25 * 5, true) ==
        doctest::Approx(-0.5458639912746954).epsilon(1e-9));
  CHECK(exact_magnetization(params, 0.25 * 15, true) ==
        doctest::Approx(0.7294599856807699).epsilon(1e-9));
}

TEST_CASE("continuous magnetization matches the dense propagator pins") {
  ModelParams params;
  CHECK(exact_magnetization(params, 1.0, false) ==
        doctest::Approx(0.09960929596709252).epsilon(1e-9));
  CHECK(exact_magnetization(params, 3.0, false) ==
        doctest::Approx(-0.1618461582014556).epsilon(1e-9));

  // Independent oracle: evolve the domain wall with the dense expm.
  const MatrixXcd h = ref::observable_matrix(build_hamiltonian(params));
  VectorXcd psi0 = VectorXcd::Zero(64);
  psi0(0b000111) = 1.0;
  const VectorXcd psi = ref::evolve(h, psi0, 1.7);
  const double want =
      ref::expectation((psi * psi.adjoint()).eval(),
                       magnetization_observable(6));
  CHECK(exact_magnetization(params, 1.7, false) ==
        doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("trotterized mode requires commensurate times") {
  ModelParams params;
  CHECK_THROWS_AS((void)exact_magnetization(params, 0.3, true),
                  std::invalid_argument);
  CHECK(exact_magnetization(params, 0.0, true) == doctest::Approx(1.0));
}

TEST_CASE("halving dt shrinks the trotter error about fourfold") {
  ModelParams coarse{.sites = 6, .dt = 0.2, .steps = 15};
  ModelParams fine{.sites = 6, .dt = 0.1, .steps = 30};
  const double truth = exact_magnetization(coarse, 3.0, false);
  const double e1 = std::abs(exact_magnetization(coarse, 3.0, true) - truth);
  const double e2 = std::abs(exact_magnetization(fine, 3.0, true) - truth);
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.0);
}
