// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qem {

/// Per-qubit readout confusion. Each qubit carries a column-stochastic 2x2
/// matrix M with M(observed, true); the full response is the tensor product.
/// A default-constructed instance has width 0 and means ideal readout.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;

  static ConfusionMatrix ideal(int width);
  /// Same flip probabilities on every qubit: p01 = P(read 1 | true 0),
  /// p10 = P(read 0 | true 1).
  static ConfusionMatrix uniform_flip(int width, double p01, double p10);

  int width() const { return width_; }
  bool trivial() const;  // width 0 or exactly identity on every qubit

  void set_qubit(int q, const Eigen::Matrix2d& m);
  const Eigen::Matrix2d& qubit(int q) const;

  void validate(double tol = 1e-12) const;

  /// Forward-fold a truth distribution (length 2^width) into the observed one.
  std::vector<double> apply(const std::vector<double>& truth) const;
  /// Same with every per-qubit matrix transposed (adjoint response).
  std::vector<double> apply_transpose(const std::vector<double>& observed) const;

  /// P(observed = 1 - true_bit | true_bit) on qubit q.
  double flip_prob(int q, int true_bit) const;

  /// Dense 2^n x 2^n response matrix, for cross-checks.
  Eigen::MatrixXd dense(int max_width = 12) const;

  std::string to_json_text() const;
  static ConfusionMatrix from_json_text(const std::string& text);

  bool operator==(const ConfusionMatrix& other) const;

 private:
  int width_ = 0;
  std::vector<Eigen::Matrix2d> qubit_;
};

}  // namespace qem
