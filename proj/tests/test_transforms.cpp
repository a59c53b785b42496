// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "qem/simulator.hpp"
#include "qem/transforms.hpp"
#include "qem/xx_model.hpp"
#include "support/reference.hpp"

using namespace qem;
using Eigen::MatrixXcd;

namespace {

Circuit layered_circuit(int width, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  Circuit c(width);
  for (int i = 0; i < 30; ++i) {
    if (rng() % 3 == 0) {
      int a = static_cast<int>(rng() % width);
      int b = static_cast<int>(rng() % width);
      if (a == b) b = (b + 1) % width;
      c.append(Gate::cnot(a, b));
    } else {
      const int q = static_cast<int>(rng() % width);
      if (rng() % 2) c.append(Gate::h(q));
      else c.append(Gate::ry(q, ang(rng)));
    }
  }
  return c;
}

}  // namespace

TEST_CASE("all 256 pauli sandwiches are classified correctly") {
  const MatrixXcd cnot = Gate::cnot(0, 1).unitary();
  const auto& table = twirl_table();
  std::set<std::array<int, 4>> listed;
  for (const auto& row : table)
    listed.insert({static_cast<int>(row.p), static_cast<int>(row.q),
                   static_cast<int>(row.r), static_cast<int>(row.s)});
  CHECK(listed.size() == 16);

  int invariant = 0;
  const PauliOp ops[4] = {PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z};
  for (PauliOp p : ops)
    for (PauliOp q : ops)
      for (PauliOp r : ops)
        for (PauliOp s : ops) {
          const MatrixXcd dressed =
              kroneckerProduct(pauli_matrix(q), pauli_matrix(p)).eval() * cnot *
              kroneckerProduct(pauli_matrix(s), pauli_matrix(r)).eval();
          const bool same = approx_equal_up_to_phase(dressed, cnot, 1e-12);
          const bool in_table =
              listed.count({static_cast<int>(p), static_cast<int>(q),
                            static_cast<int>(r), static_cast<int>(s)}) > 0;
          CHECK(same == in_table);
          invariant += same;
        }
  CHECK(invariant == 16);
}

TEST_CASE("fold factor accepts only 1, 3 and 5") {
  CHECK(FoldFactor(1).value() == 1);
  CHECK(FoldFactor(3).value() == 3);
  CHECK(FoldFactor(5).value() == 5);
  for (int bad : {0, 2, 4, 6, 7, -1})
    CHECK_THROWS_AS((void)FoldFactor(bad), std::invalid_argument);
}

TEST_CASE("randomized compiling preserves the unitary up to phase") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    const Circuit base = layered_circuit(3, seed);
    const Circuit compiled = randomized_compile(base, 1000 + seed);
    CHECK(compiled.cnot_count() == base.cnot_count());
    CHECK(approx_equal_up_to_phase(ref::circuit_matrix(compiled),
                                   ref::circuit_matrix(base), 1e-9));
    for (const auto& g : compiled.gates()) {
      const bool ok = g.is_cnot() || g.kind == GateKind::U3;
      CHECK(ok);
    }
  }
}

TEST_CASE("randomized compiling is deterministic in the seed") {
  const Circuit base = layered_circuit(4, 9);
  const Circuit a = randomized_compile(base, 42);
  const Circuit b = randomized_compile(base, 42);
  CHECK(a == b);
  bool any_differs = false;
  for (uint64_t s = 43; s < 48 && !any_differs; ++s)
    any_differs = !(randomized_compile(base, s) == a);
  CHECK(any_differs);
}

TEST_CASE("twirled circuits average depolarizing noise without bias") {
  // Noiseless check: expectation values are untouched instance by instance.
  const Circuit base = layered_circuit(3, 21);
  Observable obs(3);
  obs.add_term(1.0, {PauliOp::I, PauliOp::I, PauliOp::Z});
  const double want = expectation(simulate_density(base, NoiseModel{}), obs);
  for (uint64_t s = 0; s < 5; ++s) {
    const Circuit inst = randomized_compile(base, 500 + s);
    const double got = expectation(simulate_density(inst, NoiseModel{}), obs);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("folding multiplies cnots and keeps the noiseless unitary") {
  const Circuit base = layered_circuit(3, 33);
  const int cnots = base.cnot_count();
  for (int factor : {1, 3, 5}) {
    const Circuit folded = fold_cnots(base, FoldFactor(factor));
    CHECK(folded.cnot_count() == factor * cnots);
    CHECK(folded.gate_count() ==
          base.gate_count() + (factor - 1) * cnots);
    CHECK(approx_equal_up_to_phase(ref::circuit_matrix(folded),
                                   ref::circuit_matrix(base), 1e-9));
  }
}

TEST_CASE("folding increases mixedness under depolarizing noise") {
  const Circuit base = trotter_circuit(ModelParams{.sites = 3, .steps = 2});
  NoiseModel nm;
  nm.cnot_depolarizing = 0.02;
  double last = 2.0;
  for (int factor : {1, 3, 5}) {
    const Circuit folded = fold_cnots(base, FoldFactor(factor));
    const double purity = simulate_density(folded, nm).purity();
    CHECK(purity < last);
    last = purity;
  }
}

TEST_CASE("estimation circuits keep the cnot skeleton and invert exactly") {
  const ModelParams params{.sites = 4, .steps = 2};
  Circuit target = domain_wall_prep(params.sites);
  target.extend(trotter_circuit(params));
  const Circuit est = derive_estimation_circuit(target, 777);

  CHECK(est.cnot_count() == target.cnot_count());
  std::vector<Gate> target_cnots, est_cnots;
  for (const auto& g : target.gates())
    if (g.is_cnot()) target_cnots.push_back(g);
  int singles = 0;
  for (const auto& g : est.gates()) {
    if (g.is_cnot()) est_cnots.push_back(g);
    else singles++;
  }
  REQUIRE(target_cnots.size() == est_cnots.size());
  for (size_t i = 0; i < est_cnots.size(); ++i)
    CHECK(target_cnots[i] == est_cnots[i]);
  CHECK(singles == 2 * params.sites);

  // The skeleton is identity here, so the ideal output is exactly |0...0>.
  const StateVector out = simulate_statevector(est);
  CHECK(std::abs(out.amp(0)) == doctest::Approx(1.0).epsilon(1e-12));
  for (int q = 0; q < params.sites; ++q) {
    Observable z(params.sites);
    PauliString s(params.sites, PauliOp::I);
    s[q] = PauliOp::Z;
    z.add_term(1.0, s);
    CHECK(expectation(out, z) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("estimation derivation is deterministic and seed sensitive") {
  const Circuit target = layered_circuit(3, 55);
  CHECK(derive_estimation_circuit(target, 5) ==
        derive_estimation_circuit(target, 5));
  CHECK(!(derive_estimation_circuit(target, 5) ==
          derive_estimation_circuit(target, 6)));
}

TEST_CASE("estimation first-layer angles cover the block sphere measure") {
  // theta = 2 asin(sqrt(u)) puts cos(theta) uniform on [-1, 1]; check the
  // empirical mean of cos(theta) over many derivations is near zero.
  Circuit tiny(1);
  double sum = 0.0;
  int count = 0;
  for (uint64_t s = 0; s < 400; ++s) {
    const Circuit est = derive_estimation_circuit(tiny, s);
    for (const auto& g : est.gates()) {
      REQUIRE(g.kind == GateKind::U3);
      sum += std::cos(g.angles[0]);
      ++count;
      break;  // first layer only
    }
  }
  CHECK(count == 400);
  CHECK(std::abs(sum / count) < 0.1);
}
