// SPDX-License-Identifier: Apache-2.0
#include "qem/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>
#include <fmt/format.h>

namespace qem {

std::vector<double> unfold(const std::vector<double>& measured,
                           const ConfusionMatrix& readout, int iterations) {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (measured.empty()) throw std::invalid_argument("empty distribution");
  if (readout.width() != 0 &&
      measured.size() != (size_t{1} << readout.width()))
    throw std::invalid_argument("distribution length differs from 2^width");
  double total = 0.0;
  for (double x : measured) {
    if (x < 0.0 || !std::isfinite(x))
      throw std::invalid_argument("measured entries must be non-negative");
    total += x;
  }
  if (total <= 0.0) throw std::invalid_argument("measured sums to zero");
  // Trivial readout is a fixed point bit for bit, not just numerically.
  if (readout.trivial()) return measured;

  const size_t dim = measured.size();
  std::vector<double> truth(dim, total / static_cast<double>(dim));
  std::vector<double> ratio(dim);
  for (int it = 0; it < iterations; ++it) {
    const std::vector<double> folded = readout.apply(truth);
    for (size_t o = 0; o < dim; ++o)
      ratio[o] = folded[o] > 0.0 ? measured[o] / folded[o] : 0.0;
    const std::vector<double> back = readout.apply_transpose(ratio);
    for (size_t t = 0; t < dim; ++t) truth[t] *= back[t];
  }
  return truth;
}

std::vector<double> unfold(const CountHistogram& counts,
                           const ConfusionMatrix& readout, int iterations) {
  return unfold(counts.distribution(), readout, iterations);
}

std::vector<double> unfold_pseudoinverse(const std::vector<double>& measured,
                                         const ConfusionMatrix& readout) {
  if (readout.width() == 0) return measured;
  if (measured.size() != (size_t{1} << readout.width()))
    throw std::invalid_argument("distribution length differs from 2^width");
  const Eigen::MatrixXd r = readout.dense();
  Eigen::VectorXd m(measured.size());
  for (size_t i = 0; i < measured.size(); ++i) m(i) = measured[i];
  const Eigen::VectorXd t =
      r.completeOrthogonalDecomposition().pseudoInverse() * m;
  return std::vector<double>(t.data(), t.data() + t.size());
}

FidelityEstimate estimate_fidelity(
    const std::map<int, std::vector<double>>& per_fold_values,
    FidelityMode mode, int width) {
  if (per_fold_values.empty())
    throw std::invalid_argument("no estimation data");
  if (mode == FidelityMode::AllZerosProbability && width < 1)
    throw std::invalid_argument("all-zeros mode needs the qubit count");

  FidelityEstimate out;
  for (const auto& [fold, values] : per_fold_values) {
    if (values.empty())
      throw std::invalid_argument(
          fmt::format("no estimation values for fold {}", fold));
    std::vector<double> fids;
    fids.reserve(values.size());
    if (mode == FidelityMode::SigmaZLast) {
      fids = values;
    } else {
      const double floor_p = 1.0 / static_cast<double>(uint64_t{1} << width);
      for (double p0 : values) fids.push_back((p0 - floor_p) / (1.0 - floor_p));
    }
    const Aggregate agg = aggregate(fids);
    FoldFidelity ff;
    ff.one_minus_p = agg.mean;
    ff.sem = agg.sem;
    ff.instances = agg.count;
    if (ff.one_minus_p > 1.0) {
      ff.one_minus_p = 1.0;
      ff.clipped = true;
    } else if (ff.one_minus_p < kMinFidelity) {
      ff.one_minus_p = kMinFidelity;
      ff.clipped = true;
    }
    out[fold] = ff;
  }
  return out;
}

double correct_depolarizing(double noisy, double one_minus_p,
                            double trace_term) {
  if (!(one_minus_p > 0.0))
    throw std::domain_error(
        fmt::format("fidelity {} is not positive", one_minus_p));
  return (noisy - trace_term) / one_minus_p + trace_term;
}

ZneResult zne_quadratic(std::span<const ZnePoint> points) {
  if (points.size() != 3)
    throw std::invalid_argument("quadratic extrapolation needs three folds");
  const ZnePoint* by_fold[3] = {nullptr, nullptr, nullptr};
  for (const auto& pt : points) {
    int slot = -1;
    if (pt.fold == 1) slot = 0;
    if (pt.fold == 3) slot = 1;
    if (pt.fold == 5) slot = 2;
    if (slot < 0)
      throw std::invalid_argument(
          fmt::format("unexpected fold factor {}", pt.fold));
    if (by_fold[slot])
      throw std::invalid_argument(
          fmt::format("duplicate fold factor {}", pt.fold));
    by_fold[slot] = &pt;
  }
  // Lagrange basis at n = 0 through n = 1, 3, 5.
  constexpr double w[3] = {15.0 / 8.0, -5.0 / 4.0, 3.0 / 8.0};
  ZneResult r;
  double var = 0.0;
  for (int i = 0; i < 3; ++i) {
    r.value += w[i] * by_fold[i]->value;
    var += w[i] * w[i] * by_fold[i]->sem * by_fold[i]->sem;
  }
  r.sem = std::sqrt(var);
  return r;
}

Aggregate aggregate(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("no values to aggregate");
  Aggregate a;
  a.count = static_cast<int>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / a.count;
  if (a.count == 1) {
    a.single_sample = true;
    return a;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - a.mean) * (v - a.mean);
  a.sd = std::sqrt(ss / (a.count - 1));
  a.sem = a.sd / std::sqrt(static_cast<double>(a.count));
  return a;
}

MitigatedValue mitigate(const std::map<int, Aggregate>& target_per_fold,
                        const FidelityEstimate& fidelity, double trace_term,
                        double fidelity_floor) {
  if (target_per_fold.empty()) throw std::invalid_argument("no target data");
  std::vector<ZnePoint> pts;
  MitigatedValue out;
  for (const auto& [fold, agg] : target_per_fold) {
    const auto it = fidelity.find(fold);
    if (it == fidelity.end())
      throw std::invalid_argument(
          fmt::format("missing fidelity for fold {}", fold));
    const FoldFidelity& ff = it->second;
    if (ff.one_minus_p < fidelity_floor) out.unreliable = true;
    const double denom = ff.one_minus_p;
    const double corrected = correct_depolarizing(agg.mean, denom, trace_term);
    // First order: d/dy = 1/(1-p), d/d(1-p) = -(y - c)/(1-p)^2.
    const double dy = agg.sem / denom;
    const double dp = (agg.mean - trace_term) * ff.sem / (denom * denom);
    ZnePoint pt;
    pt.fold = fold;
    pt.value = corrected;
    pt.sem = std::sqrt(dy * dy + dp * dp);
    pts.push_back(pt);
  }
  const ZneResult z = zne_quadratic(pts);
  out.value = z.value;
  out.sem = z.sem;
  out.per_fold = std::move(pts);
  return out;
}

}  // namespace qem
