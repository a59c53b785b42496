// SPDX-License-Identifier: Apache-2.0
#include "qem/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "qem/rng.hpp"

namespace qem {

using cd = std::complex<double>;

bool NoiseModel::ideal() const {
  return cnot_depolarizing == 0.0 && coherent_angle == 0.0 &&
         global_depolarizing == 0.0 && readout.trivial();
}

void NoiseModel::validate() const {
  if (cnot_depolarizing < 0 || cnot_depolarizing > 1)
    throw std::invalid_argument("cnot_depolarizing outside [0, 1]");
  if (global_depolarizing < 0 || global_depolarizing > 1)
    throw std::invalid_argument("global_depolarizing outside [0, 1]");
  if (!std::isfinite(coherent_angle))
    throw std::invalid_argument("coherent_angle not finite");
  readout.validate();
}

DensityMatrix DensityMatrix::zero_state(int width) {
  if (width < 0 || width > 30)
    throw std::invalid_argument("density width out of range");
  const size_t dim = size_t{1} << width;
  DensityMatrix rho;
  rho.width = width;
  rho.mat = Eigen::MatrixXcd::Zero(dim, dim);
  rho.mat(0, 0) = 1.0;
  return rho;
}

double DensityMatrix::purity() const { return mat.squaredNorm(); }

void DensityMatrix::validate(double tol, double eig_tol) const {
  const double herm = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol)
    throw std::runtime_error(fmt::format("density not Hermitian ({})", herm));
  const double tr = std::abs(mat.trace() - cd(1.0, 0.0));
  if (tr > tol)
    throw std::runtime_error(fmt::format("density trace off by {}", tr));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat,
                                                     Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -eig_tol)
    throw std::runtime_error(
        fmt::format("density has negative eigenvalue {}", lo));
}

StateVector StateVector::zero_state(int width) {
  if (width < 0 || width > 30)
    throw std::invalid_argument("state width out of range");
  StateVector psi;
  psi.width = width;
  psi.amp = Eigen::VectorXcd::Zero(size_t{1} << width);
  psi.amp(0) = 1.0;
  return psi;
}

std::vector<double> CountHistogram::distribution() const {
  if (shots == 0) throw std::invalid_argument("histogram has no shots");
  std::vector<double> d(size_t{1} << width, 0.0);
  for (const auto& [outcome, n] : counts)
    d.at(outcome) = static_cast<double>(n) / static_cast<double>(shots);
  return d;
}

std::string outcome_bits(uint64_t outcome, int width) {
  std::string s(width, '0');
  for (int q = 0; q < width; ++q)
    if ((outcome >> q) & 1) s[q] = '1';
  return s;
}

uint64_t outcome_from_bits(const std::string& bits) {
  uint64_t v = 0;
  for (size_t q = 0; q < bits.size(); ++q) {
    if (bits[q] == '1')
      v |= uint64_t{1} << q;
    else if (bits[q] != '0')
      throw std::invalid_argument("bitstring has non-binary character");
  }
  return v;
}

namespace {

void check_qubit(int q, int width) {
  if (q < 0 || q >= width)
    throw std::invalid_argument(
        fmt::format("qubit {} outside width {}", q, width));
}

// rho -> U rho U^dag for a single-qubit gate, u in row-major order.
void density_1q(Eigen::MatrixXcd& m, int q, const cd u[4]) {
  const size_t dim = m.rows();
  const size_t bit = size_t{1} << q;
  cd* data = m.data();
  // Left multiply by U: mix row pairs within each column.
  for (size_t col = 0; col < dim; ++col) {
    cd* p = data + col * dim;
    for (size_t base = 0; base < dim; base += bit << 1)
      for (size_t i = base; i < base + bit; ++i) {
        const cd a = p[i], b = p[i | bit];
        p[i] = u[0] * a + u[1] * b;
        p[i | bit] = u[2] * a + u[3] * b;
      }
  }
  // Right multiply by U^dag: mix column pairs.
  const cd c0 = std::conj(u[0]), c1 = std::conj(u[1]);
  const cd c2 = std::conj(u[2]), c3 = std::conj(u[3]);
  for (size_t base = 0; base < dim; base += bit << 1)
    for (size_t c = base; c < base + bit; ++c) {
      cd* pa = data + c * dim;
      cd* pb = data + (c | bit) * dim;
      for (size_t r = 0; r < dim; ++r) {
        const cd a = pa[r], b = pb[r];
        pa[r] = a * c0 + b * c1;
        pb[r] = a * c2 + b * c3;
      }
    }
}

void density_cnot(Eigen::MatrixXcd& m, int control, int target) {
  const size_t dim = m.rows();
  const size_t cbit = size_t{1} << control;
  const size_t tbit = size_t{1} << target;
  cd* data = m.data();
  for (size_t col = 0; col < dim; ++col) {
    cd* p = data + col * dim;
    for (size_t i = 0; i < dim; ++i)
      if ((i & cbit) && !(i & tbit)) std::swap(p[i], p[i | tbit]);
  }
  for (size_t c = 0; c < dim; ++c)
    if ((c & cbit) && !(c & tbit))
      std::swap_ranges(data + c * dim, data + (c + 1) * dim,
                       data + (c | tbit) * dim);
}

void state_1q(Eigen::VectorXcd& v, int q, const cd u[4]) {
  const size_t dim = v.size();
  const size_t bit = size_t{1} << q;
  cd* p = v.data();
  for (size_t base = 0; base < dim; base += bit << 1)
    for (size_t i = base; i < base + bit; ++i) {
      const cd a = p[i], b = p[i | bit];
      p[i] = u[0] * a + u[1] * b;
      p[i | bit] = u[2] * a + u[3] * b;
    }
}

void state_cnot(Eigen::VectorXcd& v, int control, int target) {
  const size_t dim = v.size();
  const size_t cbit = size_t{1} << control;
  const size_t tbit = size_t{1} << target;
  cd* p = v.data();
  for (size_t i = 0; i < dim; ++i)
    if ((i & cbit) && !(i & tbit)) std::swap(p[i], p[i | tbit]);
}

void gate_matrix_1q(const Gate& g, cd u[4]) {
  const Eigen::MatrixXcd m = g.unitary();
  u[0] = m(0, 0);
  u[1] = m(0, 1);
  u[2] = m(1, 0);
  u[3] = m(1, 1);
}

}  // namespace

void apply_gate(DensityMatrix& rho, const Gate& g) {
  for (int i = 0; i < g.arity(); ++i) check_qubit(g.qubits[i], rho.width);
  if (g.is_cnot()) {
    density_cnot(rho.mat, g.control(), g.target());
    return;
  }
  if (g.kind == GateKind::I) return;
  cd u[4];
  gate_matrix_1q(g, u);
  density_1q(rho.mat, g.qubits[0], u);
}

void apply_gate(StateVector& psi, const Gate& g) {
  for (int i = 0; i < g.arity(); ++i) check_qubit(g.qubits[i], psi.width);
  if (g.is_cnot()) {
    state_cnot(psi.amp, g.control(), g.target());
    return;
  }
  if (g.kind == GateKind::I) return;
  cd u[4];
  gate_matrix_1q(g, u);
  state_1q(psi.amp, g.qubits[0], u);
}

void apply_depolarizing(DensityMatrix& rho, std::span<const int> qubits,
                        double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("probability outside [0,1]");
  if (qubits.empty()) throw std::invalid_argument("empty depolarizing subset");
  uint64_t smask = 0;
  for (int q : qubits) {
    check_qubit(q, rho.width);
    if (smask & (1ull << q))
      throw std::invalid_argument("duplicate qubit in depolarizing subset");
    smask |= 1ull << q;
  }
  if (p == 0.0) return;

  const int k = static_cast<int>(qubits.size());
  const size_t dim = size_t{1} << rho.width;
  const size_t sub = size_t{1} << k;
  const size_t dimR = dim >> k;

  // Enumerate bit patterns of the subset and of its complement.
  std::vector<size_t> spat, rpat;
  spat.reserve(sub);
  rpat.reserve(dimR);
  for (size_t i = 0; i < dim; ++i) {
    if ((i & ~smask) == 0) spat.push_back(i);
    if ((i & smask) == 0) rpat.push_back(i);
  }

  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dimR, dimR);
  for (size_t b = 0; b < dimR; ++b)
    for (size_t a = 0; a < dimR; ++a) {
      cd acc = 0.0;
      for (size_t s = 0; s < sub; ++s)
        acc += rho.mat(rpat[a] | spat[s], rpat[b] | spat[s]);
      t(a, b) = acc;
    }

  rho.mat *= (1.0 - p);
  const double w = p / static_cast<double>(sub);
  for (size_t b = 0; b < dimR; ++b)
    for (size_t a = 0; a < dimR; ++a) {
      const cd add = w * t(a, b);
      for (size_t s = 0; s < sub; ++s)
        rho.mat(rpat[a] | spat[s], rpat[b] | spat[s]) += add;
    }
}

void apply_coherent_zx(DensityMatrix& rho, int control, int target,
                       double angle) {
  check_qubit(control, rho.width);
  check_qubit(target, rho.width);
  if (control == target)
    throw std::invalid_argument("control equals target");
  if (angle == 0.0) return;

  // Block diagonal in the control bit: RX(angle) on the target when the
  // control is 0, RX(-angle) when it is 1.
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const cd off0(0.0, -s);  // control clear
  const cd off1(0.0, s);   // control set
  const size_t dim = rho.mat.rows();
  const size_t cbit = size_t{1} << control;
  const size_t tbit = size_t{1} << target;
  cd* data = rho.mat.data();

  for (size_t col = 0; col < dim; ++col) {
    cd* p = data + col * dim;
    for (size_t base = 0; base < dim; base += tbit << 1)
      for (size_t i = base; i < base + tbit; ++i) {
        const cd off = (i & cbit) ? off1 : off0;
        const cd a = p[i], b = p[i | tbit];
        p[i] = c * a + off * b;
        p[i | tbit] = off * a + c * b;
      }
  }
  const cd coff0 = std::conj(off0), coff1 = std::conj(off1);
  for (size_t base = 0; base < dim; base += tbit << 1)
    for (size_t col = base; col < base + tbit; ++col) {
      const cd coff = (col & cbit) ? coff1 : coff0;
      cd* pa = data + col * dim;
      cd* pb = data + (col | tbit) * dim;
      for (size_t r = 0; r < dim; ++r) {
        const cd a = pa[r], b = pb[r];
        pa[r] = a * c + b * coff;
        pb[r] = a * coff + b * c;
      }
    }
}

DensityMatrix simulate_density(const Circuit& c, const NoiseModel& noise,
                               int max_width) {
  if (c.width() > max_width)
    throw std::invalid_argument(
        fmt::format("circuit width {} exceeds density cap {}", c.width(),
                    max_width));
  noise.validate();
  DensityMatrix rho = DensityMatrix::zero_state(c.width());
  for (const auto& g : c.gates()) {
    apply_gate(rho, g);
    if (g.is_cnot()) {
      if (noise.coherent_angle != 0.0)
        apply_coherent_zx(rho, g.control(), g.target(), noise.coherent_angle);
      if (noise.cnot_depolarizing > 0.0) {
        const int pair[2] = {g.control(), g.target()};
        apply_depolarizing(rho, pair, noise.cnot_depolarizing);
      }
    }
  }
  if (noise.global_depolarizing > 0.0) {
    std::vector<int> all(c.width());
    std::iota(all.begin(), all.end(), 0);
    apply_depolarizing(rho, all, noise.global_depolarizing);
  }
  return rho;
}

StateVector simulate_statevector(const Circuit& c, int max_width) {
  if (c.width() > max_width)
    throw std::invalid_argument(
        fmt::format("circuit width {} exceeds statevector cap {}", c.width(),
                    max_width));
  StateVector psi = StateVector::zero_state(c.width());
  for (const auto& g : c.gates()) apply_gate(psi, g);
  return psi;
}

namespace {

struct PauliMasks {
  uint64_t flip = 0;   // X or Y positions
  uint64_t phase = 0;  // Y or Z positions
  cd yfactor{1.0, 0.0};
};

PauliMasks pauli_masks(const PauliString& s) {
  PauliMasks pm;
  int ny = 0;
  for (size_t q = 0; q < s.size(); ++q) {
    switch (s[q]) {
      case PauliOp::I:
        break;
      case PauliOp::X:
        pm.flip |= 1ull << q;
        break;
      case PauliOp::Y:
        pm.flip |= 1ull << q;
        pm.phase |= 1ull << q;
        ++ny;
        break;
      case PauliOp::Z:
        pm.phase |= 1ull << q;
        break;
    }
  }
  static const cd ipow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  pm.yfactor = ipow[ny & 3];
  return pm;
}

}  // namespace

double expectation(const DensityMatrix& rho, const Observable& obs) {
  if (obs.width != rho.width)
    throw std::invalid_argument("observable width differs from state width");
  const size_t dim = rho.mat.rows();
  double total = obs.constant;
  for (const auto& [coeff, s] : obs.terms) {
    const PauliMasks pm = pauli_masks(s);
    cd acc = 0.0;
    for (size_t j = 0; j < dim; ++j) {
      const double sign =
          (__builtin_popcountll(j & pm.phase) & 1) ? -1.0 : 1.0;
      acc += sign * rho.mat(j, j ^ pm.flip);
    }
    total += coeff * (pm.yfactor * acc).real();
  }
  return total;
}

double expectation(const StateVector& psi, const Observable& obs) {
  if (obs.width != psi.width)
    throw std::invalid_argument("observable width differs from state width");
  const size_t dim = psi.amp.size();
  double total = obs.constant;
  for (const auto& [coeff, s] : obs.terms) {
    const PauliMasks pm = pauli_masks(s);
    cd acc = 0.0;
    for (size_t k = 0; k < dim; ++k) {
      const size_t j = k ^ pm.flip;  // P maps |j> onto |k>
      const double sign =
          (__builtin_popcountll(j & pm.phase) & 1) ? -1.0 : 1.0;
      acc += std::conj(psi.amp(k)) * psi.amp(j) * sign;
    }
    total += coeff * (pm.yfactor * acc).real();
  }
  return total;
}

double expectation(const std::vector<double>& dist, const Observable& obs) {
  if (dist.size() != (size_t{1} << obs.width))
    throw std::invalid_argument("distribution length differs from 2^width");
  double total = obs.constant;
  for (const auto& [coeff, s] : obs.terms) {
    uint64_t zmask = 0;
    for (size_t q = 0; q < s.size(); ++q) {
      if (s[q] == PauliOp::X || s[q] == PauliOp::Y)
        throw std::invalid_argument(
            "distribution expectation needs a diagonal observable");
      if (s[q] == PauliOp::Z) zmask |= 1ull << q;
    }
    double acc = 0.0;
    for (size_t j = 0; j < dist.size(); ++j)
      acc += ((__builtin_popcountll(j & zmask) & 1) ? -1.0 : 1.0) * dist[j];
    total += coeff * acc;
  }
  return total;
}

std::vector<double> outcome_distribution(const DensityMatrix& rho) {
  const size_t dim = rho.mat.rows();
  std::vector<double> d(dim);
  double sum = 0.0;
  for (size_t i = 0; i < dim; ++i) {
    d[i] = std::max(0.0, rho.mat(i, i).real());
    sum += d[i];
  }
  if (sum <= 0.0)
    throw std::runtime_error("density diagonal sums to zero");
  for (double& x : d) x /= sum;
  return d;
}

CountHistogram sample_counts(const DensityMatrix& rho, uint64_t shots,
                             const ConfusionMatrix& readout, uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  if (readout.width() != 0 && readout.width() != rho.width)
    throw std::invalid_argument("readout width differs from state width");
  const std::vector<double> d = outcome_distribution(rho);
  std::vector<double> cum(d.size());
  double run = 0.0;
  for (size_t i = 0; i < d.size(); ++i) {
    run += d[i];
    cum[i] = run;
  }
  cum.back() = 1.0;

  const bool flip = readout.width() != 0 && !readout.trivial();
  std::mt19937_64 rng(seed);
  CountHistogram hist;
  hist.width = rho.width;
  hist.shots = shots;
  for (uint64_t s = 0; s < shots; ++s) {
    const double u = uniform01(rng);
    uint64_t outcome = static_cast<uint64_t>(
        std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (outcome >= d.size()) outcome = d.size() - 1;
    if (flip) {
      for (int q = 0; q < rho.width; ++q) {
        const int bit = (outcome >> q) & 1;
        if (uniform01(rng) < readout.flip_prob(q, bit))
          outcome ^= uint64_t{1} << q;
      }
    }
    ++hist.counts[outcome];
  }
  return hist;
}

}  // namespace qem
