// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qem/simulator.hpp"
#include "support/reference.hpp"

using namespace qem;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

Circuit random_circuit(int width, int gates, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  Circuit c(width);
  for (int i = 0; i < gates; ++i) {
    if (width >= 2 && rng() % 3 == 0) {
      int a = static_cast<int>(rng() % width);
      int b = static_cast<int>(rng() % width);
      if (a == b) b = (b + 1) % width;
      c.append(Gate::cnot(a, b));
    } else {
      const int q = static_cast<int>(rng() % width);
      switch (rng() % 5) {
        case 0: c.append(Gate::h(q)); break;
        case 1: c.append(Gate::rx(q, ang(rng))); break;
        case 2: c.append(Gate::ry(q, ang(rng))); break;
        case 3: c.append(Gate::rz(q, ang(rng))); break;
        default: c.append(Gate::u3(q, ang(rng), ang(rng), ang(rng))); break;
      }
    }
  }
  return c;
}

DensityMatrix from_dense(int width, const MatrixXcd& m) {
  DensityMatrix rho;
  rho.width = width;
  rho.mat = m;
  return rho;
}

Observable z_on(int width, int q) {
  Observable obs(width);
  PauliString s(width, PauliOp::I);
  s[q] = PauliOp::Z;
  obs.add_term(1.0, s);
  return obs;
}

}  // namespace

TEST_CASE("zero states and purity") {
  const auto rho = DensityMatrix::zero_state(3);
  CHECK(rho.mat.rows() == 8);
  CHECK(rho.mat(0, 0) == std::complex<double>(1, 0));
  CHECK(rho.purity() == doctest::Approx(1.0));
  rho.validate();
  const auto psi = StateVector::zero_state(3);
  CHECK(psi.amp(0) == std::complex<double>(1, 0));
  CHECK_THROWS_AS((void)DensityMatrix::zero_state(-1), std::invalid_argument);
}

TEST_CASE("validate flags broken density matrices") {
  auto bad = DensityMatrix::zero_state(1);
  bad.mat(0, 1) = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);
  auto offtrace = DensityMatrix::zero_state(1);
  offtrace.mat(0, 0) = 0.7;
  CHECK_THROWS_AS(offtrace.validate(), std::runtime_error);
  auto negative = DensityMatrix::zero_state(1);
  negative.mat(0, 0) = 1.5;
  negative.mat(1, 1) = -0.5;
  CHECK_THROWS_AS(negative.validate(), std::runtime_error);
}

TEST_CASE("apply_gate matches dense conjugation for both state types") {
  std::mt19937_64 rng(5);
  for (uint64_t trial = 0; trial < 8; ++trial) {
    const int n = 3;
    const Circuit c = random_circuit(n, 20, 100 + trial);
    StateVector psi = StateVector::zero_state(n);
    DensityMatrix rho = DensityMatrix::zero_state(n);
    VectorXcd ref_psi = VectorXcd::Zero(8);
    ref_psi(0) = 1.0;
    for (const auto& g : c.gates()) {
      apply_gate(psi, g);
      apply_gate(rho, g);
      ref_psi = ref::gate_matrix(g, n) * ref_psi;
    }
    CHECK((psi.amp - ref_psi).cwiseAbs().maxCoeff() < 1e-11);
    const MatrixXcd ref_rho = ref_psi * ref_psi.adjoint();
    CHECK((rho.mat - ref_rho).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("apply_gate validates qubits") {
  auto rho = DensityMatrix::zero_state(2);
  CHECK_THROWS_AS(apply_gate(rho, Gate::x(2)), std::invalid_argument);
  CHECK_THROWS_AS(apply_gate(rho, Gate::cnot(1, 1)), std::invalid_argument);
}

TEST_CASE("depolarizing matches the Pauli-mixture reference") {
  for (uint64_t trial = 0; trial < 4; ++trial) {
    const int n = 3;
    const VectorXcd psi = ref::random_state(1 << n, 40 + trial);
    const MatrixXcd dense = psi * psi.adjoint();
    for (std::vector<int> subset :
         {std::vector<int>{0}, std::vector<int>{2}, std::vector<int>{0, 2},
          std::vector<int>{1, 0}, std::vector<int>{0, 1, 2}}) {
      auto rho = from_dense(n, dense);
      apply_depolarizing(rho, subset, 0.23);
      const MatrixXcd want = ref::depolarize(dense, subset, n, 0.23);
      CHECK((rho.mat - want).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(rho.mat.trace().real() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("depolarizing validates inputs and reduces purity") {
  auto rho = DensityMatrix::zero_state(2);
  apply_gate(rho, Gate::h(0));
  const std::vector<int> q0{0}, dup{1, 1}, oob{0, 2};
  CHECK_THROWS_AS(apply_depolarizing(rho, q0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(apply_depolarizing(rho, q0, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(apply_depolarizing(rho, std::vector<int>{}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_depolarizing(rho, dup, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(apply_depolarizing(rho, oob, 0.1), std::invalid_argument);
  const double before = rho.purity();
  apply_depolarizing(rho, q0, 0.3);
  CHECK(rho.purity() <= before + 1e-12);
  rho.validate();
}

TEST_CASE("global depolarizing on one idle qubit gives the textbook mixture") {
  auto rho = DensityMatrix::zero_state(1);
  const std::vector<int> all{0};
  apply_depolarizing(rho, all, 0.2);
  CHECK(rho.mat(0, 0).real() == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(rho.mat(1, 1).real() == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("coherent zx kernel matches the exponentiated reference") {
  for (uint64_t trial = 0; trial < 4; ++trial) {
    const int n = 3;
    const VectorXcd psi = ref::random_state(1 << n, 60 + trial);
    const MatrixXcd dense = psi * psi.adjoint();
    for (auto [ctrl, tgt] : {std::pair{0, 1}, std::pair{2, 0}, std::pair{1, 2}}) {
      auto rho = from_dense(n, dense);
      apply_coherent_zx(rho, ctrl, tgt, 0.17);
      const MatrixXcd zx = kroneckerProduct(ref::pauli('X'), ref::pauli('Z')).eval();
      const MatrixXcd kern =
          (std::complex<double>(0.0, -0.5 * 0.17) * zx).exp();
      const int qs[2] = {ctrl, tgt};
      const MatrixXcd full = ref::embed(kern, qs, n);
      const MatrixXcd want = full * dense * full.adjoint();
      CHECK((rho.mat - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  auto rho = DensityMatrix::zero_state(2);
  CHECK_THROWS_AS(apply_coherent_zx(rho, 1, 1, 0.1), std::invalid_argument);
}

TEST_CASE("simulate_density reproduces the dense reference channel") {
  NoiseModel nm;
  nm.cnot_depolarizing = 0.02;
  nm.coherent_angle = 0.05;
  nm.global_depolarizing = 0.01;
  for (uint64_t trial = 0; trial < 4; ++trial) {
    const Circuit c = random_circuit(3, 18, 200 + trial);
    const DensityMatrix rho = simulate_density(c, nm);
    const MatrixXcd want = ref::simulate(c, nm);
    CHECK((rho.mat - want).cwiseAbs().maxCoeff() < 1e-11);
    rho.validate(1e-9, 1e-9);
  }
}

TEST_CASE("noiseless density equals the statevector projector") {
  const Circuit c = random_circuit(4, 30, 300);
  const DensityMatrix rho = simulate_density(c, NoiseModel{});
  const StateVector psi = simulate_statevector(c);
  const MatrixXcd proj = psi.amp * psi.amp.adjoint();
  CHECK((rho.mat - proj).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("width caps are enforced") {
  Circuit wide(11);
  wide.append(Gate::x(0));
  CHECK_THROWS_AS((void)simulate_density(wide, NoiseModel{}),
                  std::invalid_argument);
  Circuit wider(21);
  wider.append(Gate::x(0));
  CHECK_THROWS_AS((void)simulate_statevector(wider), std::invalid_argument);
}

TEST_CASE("expectation agrees with the dense observable trace") {
  std::mt19937_64 rng(9);
  for (uint64_t trial = 0; trial < 6; ++trial) {
    const int n = 3;
    const Circuit c = random_circuit(n, 15, 400 + trial);
    const StateVector psi = simulate_statevector(c);
    const DensityMatrix rho = simulate_density(c, NoiseModel{});
    Observable obs(n, 0.25);
    PauliString a(n, PauliOp::I), b(n, PauliOp::I);
    a[0] = PauliOp::X;
    a[2] = PauliOp::Y;
    b[1] = PauliOp::Z;
    obs.add_term(0.8, a);
    obs.add_term(-1.3, b);
    const double want = ref::expectation(rho.mat, obs);
    CHECK(expectation(rho, obs) == doctest::Approx(want).epsilon(1e-10));
    CHECK(expectation(psi, obs) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("distribution expectation handles diagonal observables only") {
  const std::vector<double> dist{0.5, 0.125, 0.25, 0.125};
  const Observable zz = [] {
    Observable o(2, 0.0);
    o.add_term(1.0, {PauliOp::Z, PauliOp::Z});
    return o;
  }();
  // Parity weights: +,-,-,+.
  CHECK(expectation(dist, zz) ==
        doctest::Approx(0.5 - 0.125 - 0.25 + 0.125));
  CHECK_THROWS_AS((void)expectation(dist, z_on(3, 0)), std::invalid_argument);
  Observable xo(2);
  xo.add_term(1.0, {PauliOp::X, PauliOp::I});
  CHECK_THROWS_AS((void)expectation(dist, xo), std::invalid_argument);
}

TEST_CASE("outcome order puts qubit q at bit q") {
  Circuit c(3);
  c.append(Gate::x(2));
  const auto dist = outcome_distribution(simulate_density(c, NoiseModel{}));
  CHECK(dist[4] == doctest::Approx(1.0));
  CHECK(outcome_bits(4, 3) == "001");
  CHECK(outcome_from_bits("001") == 4);
  CHECK(outcome_from_bits("110") == 3);
  CHECK_THROWS_AS((void)outcome_from_bits("01x"), std::invalid_argument);
}

TEST_CASE("outcome_distribution clips negatives and renormalizes") {
  auto rho = DensityMatrix::zero_state(1);
  rho.mat(0, 0) = 1.02;
  rho.mat(1, 1) = -0.02;
  const auto dist = outcome_distribution(rho);
  CHECK(dist[0] == doctest::Approx(1.0));
  CHECK(dist[1] == 0.0);
  auto dead = DensityMatrix::zero_state(1);
  dead.mat(0, 0) = 0.0;
  CHECK_THROWS_AS((void)outcome_distribution(dead), std::runtime_error);
}

TEST_CASE("sample_counts is deterministic and respects readout flips") {
  Circuit c(2);
  c.append(Gate::h(0));
  const DensityMatrix rho = simulate_density(c, NoiseModel{});
  const auto a = sample_counts(rho, 4096, ConfusionMatrix(), 77);
  const auto b = sample_counts(rho, 4096, ConfusionMatrix(), 77);
  const auto d = sample_counts(rho, 4096, ConfusionMatrix(), 78);
  CHECK(a.counts == b.counts);
  CHECK(a.counts != d.counts);
  uint64_t total = 0;
  for (const auto& [k, v] : a.counts) total += v;
  CHECK(total == 4096);
  CHECK_THROWS_AS((void)sample_counts(rho, 0, ConfusionMatrix(), 1),
                  std::invalid_argument);

  // Strong asymmetric flips on a deterministic |00> state.
  const auto noisy = sample_counts(DensityMatrix::zero_state(2), 20000,
                                   ConfusionMatrix::uniform_flip(2, 0.25, 0.0),
                                   91);
  const auto dist = noisy.distribution();
  CHECK(dist[0] == doctest::Approx(0.5625).epsilon(0.05));
  CHECK(dist[3] == doctest::Approx(0.0625).epsilon(0.2));
}

TEST_CASE("histogram distribution validates shots") {
  CountHistogram h;
  h.width = 1;
  CHECK_THROWS_AS((void)h.distribution(), std::invalid_argument);
}

TEST_CASE("observables reject identity terms and bad widths") {
  Observable obs(2, 0.5);
  CHECK_THROWS_AS(obs.add_term(1.0, {PauliOp::I, PauliOp::I}),
                  std::invalid_argument);
  CHECK_THROWS_AS(obs.add_term(1.0, {PauliOp::Z}), std::invalid_argument);
  obs.add_term(1.0, {PauliOp::Z, PauliOp::I});
  CHECK(obs.terms.size() == 1);
  CHECK(pauli_string_text(obs.terms[0].second) == "ZI");
  CHECK(pauli_string_from_text("ZI") == obs.terms[0].second);
  CHECK_THROWS_AS((void)pauli_string_from_text("ZQ"), std::invalid_argument);
}

TEST_CASE("observable dense matrix matches the reference tensor build") {
  Observable obs(3, -0.75);
  PauliString s(3, PauliOp::I);
  s[1] = PauliOp::Y;
  obs.add_term(0.4, s);
  s[0] = PauliOp::X;
  obs.add_term(-1.1, s);
  CHECK(obs.dense().isApprox(ref::observable_matrix(obs), 1e-14));
}
