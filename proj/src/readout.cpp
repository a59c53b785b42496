// SPDX-License-Identifier: Apache-2.0
#include "qem/readout.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace qem {

ConfusionMatrix ConfusionMatrix::ideal(int width) {
  if (width < 0) throw std::invalid_argument("negative confusion width");
  ConfusionMatrix cm;
  cm.width_ = width;
  cm.qubit_.assign(width, Eigen::Matrix2d::Identity());
  return cm;
}

ConfusionMatrix ConfusionMatrix::uniform_flip(int width, double p01,
                                              double p10) {
  if (p01 < 0 || p01 > 1 || p10 < 0 || p10 > 1)
    throw std::invalid_argument("flip probability outside [0, 1]");
  ConfusionMatrix cm = ideal(width);
  Eigen::Matrix2d m;
  m << 1.0 - p01, p10, p01, 1.0 - p10;
  for (int q = 0; q < width; ++q) cm.qubit_[q] = m;
  return cm;
}

bool ConfusionMatrix::trivial() const {
  for (const auto& m : qubit_)
    if (!m.isIdentity(0.0)) return false;
  return true;
}

void ConfusionMatrix::set_qubit(int q, const Eigen::Matrix2d& m) {
  if (q < 0 || q >= width_) throw std::out_of_range("qubit out of range");
  qubit_[q] = m;
  validate();
}

const Eigen::Matrix2d& ConfusionMatrix::qubit(int q) const {
  if (q < 0 || q >= width_) throw std::out_of_range("qubit out of range");
  return qubit_[q];
}

void ConfusionMatrix::validate(double tol) const {
  for (int q = 0; q < width_; ++q) {
    const auto& m = qubit_[q];
    for (int c = 0; c < 2; ++c) {
      double sum = 0;
      for (int r = 0; r < 2; ++r) {
        if (m(r, c) < -tol || m(r, c) > 1.0 + tol)
          throw std::invalid_argument(
              fmt::format("confusion entry out of range on qubit {}", q));
        sum += m(r, c);
      }
      if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument(
            fmt::format("confusion column not normalized on qubit {}", q));
    }
  }
}

namespace {
// In-place per-qubit contraction: out = prod_q M_q acting on the distribution
// viewed as a tensor with index q on bit q.
void axis_apply(std::vector<double>& d, int width,
                const std::vector<Eigen::Matrix2d>& ms, bool transpose) {
  const size_t dim = size_t{1} << width;
  for (int q = 0; q < width; ++q) {
    const auto& m = ms[q];
    const double m00 = m(0, 0);
    const double m01 = transpose ? m(1, 0) : m(0, 1);
    const double m10 = transpose ? m(0, 1) : m(1, 0);
    const double m11 = m(1, 1);
    const size_t bit = size_t{1} << q;
    for (size_t base = 0; base < dim; base += bit << 1)
      for (size_t i = base; i < base + bit; ++i) {
        const double a = d[i], b = d[i | bit];
        d[i] = m00 * a + m01 * b;
        d[i | bit] = m10 * a + m11 * b;
      }
  }
}
}  // namespace

std::vector<double> ConfusionMatrix::apply(
    const std::vector<double>& truth) const {
  if (truth.size() != (size_t{1} << width_))
    throw std::invalid_argument("distribution length differs from 2^width");
  std::vector<double> d = truth;
  axis_apply(d, width_, qubit_, false);
  return d;
}

std::vector<double> ConfusionMatrix::apply_transpose(
    const std::vector<double>& observed) const {
  if (observed.size() != (size_t{1} << width_))
    throw std::invalid_argument("distribution length differs from 2^width");
  std::vector<double> d = observed;
  axis_apply(d, width_, qubit_, true);
  return d;
}

double ConfusionMatrix::flip_prob(int q, int true_bit) const {
  if (q < 0 || q >= width_) throw std::out_of_range("qubit out of range");
  if (true_bit != 0 && true_bit != 1)
    throw std::invalid_argument("true_bit must be 0 or 1");
  return qubit_[q](1 - true_bit, true_bit);
}

Eigen::MatrixXd ConfusionMatrix::dense(int max_width) const {
  if (width_ > max_width)
    throw std::invalid_argument("confusion width exceeds dense cap");
  const size_t dim = size_t{1} << width_;
  Eigen::MatrixXd r(dim, dim);
  for (size_t t = 0; t < dim; ++t)
    for (size_t o = 0; o < dim; ++o) {
      double p = 1.0;
      for (int q = 0; q < width_; ++q)
        p *= qubit_[q]((o >> q) & 1, (t >> q) & 1);
      r(o, t) = p;
    }
  return r;
}

std::string ConfusionMatrix::to_json_text() const {
  nlohmann::json j;
  j["width"] = width_;
  auto& qs = j["qubits"] = nlohmann::json::array();
  for (const auto& m : qubit_)
    qs.push_back({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
  return j.dump(2) + "\n";
}

ConfusionMatrix ConfusionMatrix::from_json_text(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    ConfusionMatrix cm = ideal(j.at("width").get<int>());
    const auto& qs = j.at("qubits");
    if (static_cast<int>(qs.size()) != cm.width_)
      throw std::invalid_argument("confusion json width mismatch");
    for (int q = 0; q < cm.width_; ++q) {
      Eigen::Matrix2d m;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m(r, c) = qs.at(q).at(r).at(c).get<double>();
      cm.qubit_[q] = m;
    }
    cm.validate();
    return cm;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

bool ConfusionMatrix::operator==(const ConfusionMatrix& other) const {
  if (width_ != other.width_) return false;
  for (int q = 0; q < width_; ++q)
    if (qubit_[q] != other.qubit_[q]) return false;
  return true;
}

}  // namespace qem
