// SPDX-License-Identifier: Apache-2.0
#include "qem/observable.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace qem {

char pauli_char(PauliOp p) {
  switch (p) {
    case PauliOp::I: return 'I';
    case PauliOp::X: return 'X';
    case PauliOp::Y: return 'Y';
    case PauliOp::Z: return 'Z';
  }
  throw std::invalid_argument("unknown pauli op");
}

PauliOp pauli_from_char(char c) {
  switch (c) {
    case 'I': return PauliOp::I;
    case 'X': return PauliOp::X;
    case 'Y': return PauliOp::Y;
    case 'Z': return PauliOp::Z;
  }
  throw std::invalid_argument(fmt::format("unknown pauli character '{}'", c));
}

std::string pauli_string_text(const PauliString& s) {
  std::string out;
  out.reserve(s.size());
  for (PauliOp p : s) out += pauli_char(p);
  return out;
}

PauliString pauli_string_from_text(const std::string& text) {
  PauliString s;
  s.reserve(text.size());
  for (char c : text) s.push_back(pauli_from_char(c));
  return s;
}

Observable::Observable(int width, double constant)
    : width(width), constant(constant) {
  if (width < 0) throw std::invalid_argument("negative observable width");
}

void Observable::add_term(double coeff, const PauliString& s) {
  if (static_cast<int>(s.size()) != width)
    throw std::invalid_argument("pauli string length differs from width");
  bool identity = true;
  for (PauliOp p : s)
    if (p != PauliOp::I) identity = false;
  if (identity)
    throw std::invalid_argument(
        "identity term not allowed; use the constant instead");
  terms.emplace_back(coeff, s);
}

Eigen::MatrixXcd Observable::dense(int max_width) const {
  if (width > max_width)
    throw std::invalid_argument(
        fmt::format("observable width {} exceeds dense cap {}", width,
                    max_width));
  using cd = std::complex<double>;
  const size_t dim = size_t{1} << width;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  m.diagonal().setConstant(constant);
  for (const auto& [coeff, s] : terms) {
    uint64_t xmask = 0, ymask = 0, zmask = 0;
    for (int q = 0; q < width; ++q) {
      if (s[q] == PauliOp::X) xmask |= 1ull << q;
      if (s[q] == PauliOp::Y) ymask |= 1ull << q;
      if (s[q] == PauliOp::Z) zmask |= 1ull << q;
    }
    const int ny = __builtin_popcountll(ymask);
    // P|j> = i^ny * (-1)^{popcount(j & (ymask|zmask))} |j ^ (xmask|ymask)>
    static const cd ipow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    const cd yphase = ipow[ny & 3];
    for (size_t j = 0; j < dim; ++j) {
      const size_t k = j ^ (xmask | ymask);
      const double sign =
          (__builtin_popcountll(j & (ymask | zmask)) & 1) ? -1.0 : 1.0;
      m(k, j) += coeff * yphase * sign;
    }
  }
  return m;
}

}  // namespace qem
