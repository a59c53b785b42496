// SPDX-License-Identifier: Apache-2.0
#include "qem/circuit.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace qem {

using std::complex;
using cd = complex<double>;

namespace {
constexpr struct {
  GateKind kind;
  const char* name;
  int arity;
  int angles;
} kKindInfo[] = {
    {GateKind::I, "i", 1, 0},    {GateKind::X, "x", 1, 0},
    {GateKind::Y, "y", 1, 0},    {GateKind::Z, "z", 1, 0},
    {GateKind::H, "h", 1, 0},    {GateKind::RX, "rx", 1, 1},
    {GateKind::RY, "ry", 1, 1},  {GateKind::RZ, "rz", 1, 1},
    {GateKind::U3, "u3", 1, 3},  {GateKind::CNOT, "cnot", 2, 0},
};
}  // namespace

const char* kind_name(GateKind k) {
  for (const auto& info : kKindInfo)
    if (info.kind == k) return info.name;
  throw std::invalid_argument("unknown gate kind");
}

GateKind kind_from_name(const std::string& name) {
  for (const auto& info : kKindInfo)
    if (name == info.name) return info.kind;
  throw std::invalid_argument(fmt::format("unknown gate name '{}'", name));
}

int kind_arity(GateKind k) {
  for (const auto& info : kKindInfo)
    if (info.kind == k) return info.arity;
  throw std::invalid_argument("unknown gate kind");
}

int kind_angle_count(GateKind k) {
  for (const auto& info : kKindInfo)
    if (info.kind == k) return info.angles;
  throw std::invalid_argument("unknown gate kind");
}

namespace {
Gate make1(GateKind k, int q) {
  if (q < 0) throw std::out_of_range("negative qubit index");
  Gate g;
  g.kind = k;
  g.qubits = {q, q};
  return g;
}
}  // namespace

Gate Gate::id(int q) { return make1(GateKind::I, q); }
Gate Gate::x(int q) { return make1(GateKind::X, q); }
Gate Gate::y(int q) { return make1(GateKind::Y, q); }
Gate Gate::z(int q) { return make1(GateKind::Z, q); }
Gate Gate::h(int q) { return make1(GateKind::H, q); }

Gate Gate::rx(int q, double angle) {
  Gate g = make1(GateKind::RX, q);
  g.angles[0] = angle;
  return g;
}

Gate Gate::ry(int q, double angle) {
  Gate g = make1(GateKind::RY, q);
  g.angles[0] = angle;
  return g;
}

Gate Gate::rz(int q, double angle) {
  Gate g = make1(GateKind::RZ, q);
  g.angles[0] = angle;
  return g;
}

Gate Gate::u3(int q, double theta, double phi, double lambda) {
  Gate g = make1(GateKind::U3, q);
  g.angles = {theta, phi, lambda};
  return g;
}

Gate Gate::cnot(int control, int target) {
  if (control < 0 || target < 0)
    throw std::out_of_range("negative qubit index");
  if (control == target)
    throw std::invalid_argument("cnot control equals target");
  Gate g;
  g.kind = GateKind::CNOT;
  g.qubits = {control, target};
  return g;
}

Eigen::Matrix2cd u3_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::Matrix2cd m;
  m(0, 0) = cd(c, 0.0);
  m(0, 1) = -std::polar(s, lambda);
  m(1, 0) = std::polar(s, phi);
  m(1, 1) = std::polar(c, phi + lambda);
  return m;
}

Eigen::MatrixXcd Gate::unitary() const {
  const cd i1(0.0, 1.0);
  switch (kind) {
    case GateKind::I:
      return Eigen::Matrix2cd::Identity();
    case GateKind::X: {
      Eigen::Matrix2cd m;
      m << 0, 1, 1, 0;
      return m;
    }
    case GateKind::Y: {
      Eigen::Matrix2cd m;
      m << cd(0, 0), -i1, i1, cd(0, 0);
      return m;
    }
    case GateKind::Z: {
      Eigen::Matrix2cd m;
      m << 1, 0, 0, -1;
      return m;
    }
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      Eigen::Matrix2cd m;
      m << r, r, r, -r;
      return m;
    }
    case GateKind::RX: {
      const double c = std::cos(angles[0] / 2.0), s = std::sin(angles[0] / 2.0);
      Eigen::Matrix2cd m;
      m << cd(c, 0), -i1 * s, -i1 * s, cd(c, 0);
      return m;
    }
    case GateKind::RY: {
      const double c = std::cos(angles[0] / 2.0), s = std::sin(angles[0] / 2.0);
      Eigen::Matrix2cd m;
      m << c, -s, s, c;
      return m;
    }
    case GateKind::RZ: {
      Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
      m(0, 0) = std::polar(1.0, -angles[0] / 2.0);
      m(1, 1) = std::polar(1.0, angles[0] / 2.0);
      return m;
    }
    case GateKind::U3:
      return u3_matrix(angles[0], angles[1], angles[2]);
    case GateKind::CNOT: {
      // Basis |q1 q0| with the control (qubits[0]) as the low bit.
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
      m(0, 0) = 1;  // |00>
      m(3, 1) = 1;  // |01> -> |11>
      m(2, 2) = 1;  // |10>
      m(1, 3) = 1;  // |11> -> |01>
      return m;
    }
  }
  throw std::invalid_argument("unknown gate kind");
}

Gate Gate::inverse() const {
  Gate g = *this;
  switch (kind) {
    case GateKind::I:
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::H:
    case GateKind::CNOT:
      return g;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      g.angles[0] = -angles[0];
      return g;
    case GateKind::U3:
      g.angles = {-angles[0], -angles[2], -angles[1]};
      return g;
  }
  throw std::invalid_argument("unknown gate kind");
}

bool Gate::operator==(const Gate& other) const {
  if (kind != other.kind) return false;
  if (qubits[0] != other.qubits[0]) return false;
  if (arity() == 2 && qubits[1] != other.qubits[1]) return false;
  const int na = kind_angle_count(kind);
  for (int i = 0; i < na; ++i)
    if (angles[i] != other.angles[i]) return false;
  return true;
}

Circuit::Circuit(int width) : width_(width) {
  if (width < 1 || width > 64)
    throw std::invalid_argument("circuit width out of range");
}

void Circuit::append(const Gate& g) {
  uint64_t mask = 0;
  for (int i = 0; i < g.arity(); ++i) {
    const int q = g.qubits[i];
    if (q < 0 || q >= width_)
      throw std::out_of_range(
          fmt::format("gate qubit {} outside circuit width {}", q, width_));
    mask |= 1ull << q;
  }
  if (layers_.empty() || (masks_.back() & mask) != 0) {
    layers_.emplace_back();
    masks_.push_back(0);
  }
  layers_.back().push_back(g);
  masks_.back() |= mask;
}

void Circuit::extend(const Circuit& other) {
  if (other.width_ > width_)
    throw std::invalid_argument("extend source wider than target circuit");
  for (const auto& layer : other.layers_)
    for (const auto& g : layer) append(g);
}

int Circuit::gate_count() const {
  int n = 0;
  for (const auto& layer : layers_) n += static_cast<int>(layer.size());
  return n;
}

int Circuit::cnot_count() const {
  int n = 0;
  for (const auto& layer : layers_)
    for (const auto& g : layer)
      if (g.is_cnot()) ++n;
  return n;
}

std::vector<Gate> Circuit::gates() const {
  std::vector<Gate> out;
  out.reserve(gate_count());
  for (const auto& layer : layers_)
    for (const auto& g : layer) out.push_back(g);
  return out;
}

bool Circuit::operator==(const Circuit& other) const {
  return width_ == other.width_ && layers_ == other.layers_;
}

std::string Circuit::to_text() const {
  std::string out = fmt::format("qem-circuit 1\nwidth {}\n", width_);
  for (const auto& g : gates()) {
    out += kind_name(g.kind);
    for (int i = 0; i < g.arity(); ++i) out += fmt::format(" {}", g.qubits[i]);
    for (int i = 0; i < kind_angle_count(g.kind); ++i)
      out += fmt::format(" {:.17g}", g.angles[i]);
    out += '\n';
  }
  return out;
}

Circuit Circuit::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument(
        fmt::format("circuit text line {}: {}", lineno, what));
  };

  if (!std::getline(in, line)) throw std::invalid_argument("empty circuit text");
  ++lineno;
  if (line != "qem-circuit 1") fail("bad header");

  if (!std::getline(in, line)) throw std::invalid_argument("missing width line");
  ++lineno;
  int width = -1;
  if (std::sscanf(line.c_str(), "width %d", &width) != 1 || width < 1)
    fail("bad width line");

  Circuit c(width);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string name;
    ls >> name;
    GateKind kind;
    try {
      kind = kind_from_name(name);
    } catch (const std::invalid_argument&) {
      fail(fmt::format("unknown gate '{}'", name));
      throw;  // unreachable
    }
    Gate g;
    g.kind = kind;
    for (int i = 0; i < kind_arity(kind); ++i)
      if (!(ls >> g.qubits[i])) fail("missing qubit index");
    if (kind_arity(kind) == 1) g.qubits[1] = g.qubits[0];
    for (int i = 0; i < kind_angle_count(kind); ++i) {
      std::string tok;
      if (!(ls >> tok)) fail("missing angle");
      char* end = nullptr;
      g.angles[i] = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') fail("bad angle");
    }
    std::string extra;
    if (ls >> extra) fail("trailing tokens");
    if (kind == GateKind::CNOT && g.qubits[0] == g.qubits[1])
      fail("cnot control equals target");
    c.append(g);
  }
  return c;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c, int max_width) {
  const int n = c.width();
  if (n > max_width)
    throw std::invalid_argument(
        fmt::format("circuit width {} exceeds dense cap {}", n, max_width));
  const size_t dim = size_t{1} << n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);

  // Apply each gate to the columns of u in place.
  for (const auto& g : c.gates()) {
    const Eigen::MatrixXcd m = g.unitary();
    if (g.arity() == 1) {
      const size_t bit = size_t{1} << g.qubits[0];
      for (size_t col = 0; col < dim; ++col)
        for (size_t i0 = 0; i0 < dim; ++i0) {
          if (i0 & bit) continue;
          const size_t i1 = i0 | bit;
          const cd a = u(i0, col), b = u(i1, col);
          u(i0, col) = m(0, 0) * a + m(0, 1) * b;
          u(i1, col) = m(1, 0) * a + m(1, 1) * b;
        }
    } else {
      const size_t b0 = size_t{1} << g.qubits[0];
      const size_t b1 = size_t{1} << g.qubits[1];
      for (size_t col = 0; col < dim; ++col)
        for (size_t i = 0; i < dim; ++i) {
          if (i & (b0 | b1)) continue;
          const size_t j01 = i | b0, j10 = i | b1, j11 = i | b0 | b1;
          const cd a00 = u(i, col), a01 = u(j01, col);
          const cd a10 = u(j10, col), a11 = u(j11, col);
          u(i, col) = m(0, 0) * a00 + m(0, 1) * a01 + m(0, 2) * a10 + m(0, 3) * a11;
          u(j01, col) = m(1, 0) * a00 + m(1, 1) * a01 + m(1, 2) * a10 + m(1, 3) * a11;
          u(j10, col) = m(2, 0) * a00 + m(2, 1) * a01 + m(2, 2) * a10 + m(2, 3) * a11;
          u(j11, col) = m(3, 0) * a00 + m(3, 1) * a01 + m(3, 2) * a10 + m(3, 3) * a11;
        }
    }
  }
  return u;
}

std::array<double, 3> euler_zyz(const Eigen::Matrix2cd& u) {
  const double a00 = std::abs(u(0, 0));
  const double a10 = std::abs(u(1, 0));
  const double theta = 2.0 * std::atan2(a10, a00);
  if (a00 >= 1e-12) {
    const cd phase = u(0, 0) / a00;
    const cd u10 = u(1, 0) / phase;
    const cd u01 = u(0, 1) / phase;
    const double phi = (a10 >= 1e-12) ? std::arg(u10) : 0.0;
    const double lambda = (a10 >= 1e-12) ? std::arg(-u01) : std::arg(u(1, 1) / phase);
    return {theta, phi, lambda};
  }
  // theta = pi: only phi + (-lambda) is determined; pick phi = 0.
  const cd phase = u(1, 0) / a10;
  const double lambda = std::arg(-u(0, 1) / phase);
  return {theta, 0.0, lambda};
}

bool approx_equal_up_to_phase(const Eigen::MatrixXcd& a,
                              const Eigen::MatrixXcd& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  // Align global phase on the largest entry of b.
  Eigen::Index r = 0, c = 0;
  double best = -1.0;
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      if (std::abs(b(i, j)) > best) {
        best = std::abs(b(i, j));
        r = i;
        c = j;
      }
  if (best < tol) return a.cwiseAbs().maxCoeff() < tol;
  if (std::abs(a(r, c)) < tol) return false;
  const cd phase = (b(r, c) / std::abs(b(r, c))) /
                   (a(r, c) / std::abs(a(r, c)));
  return ((a * phase) - b).cwiseAbs().maxCoeff() < tol;
}

}  // namespace qem
