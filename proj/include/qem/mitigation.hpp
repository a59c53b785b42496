// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <vector>

#include "qem/readout.hpp"
#include "qem/simulator.hpp"

namespace qem {

/// Iterative Bayesian unfolding of a measured distribution through the
/// readout response, starting from a uniform prior. Returns the estimated
/// truth distribution (same length, sums to the measured total).
std::vector<double> unfold(const std::vector<double>& measured,
                           const ConfusionMatrix& readout,
                           int iterations = 100);
std::vector<double> unfold(const CountHistogram& counts,
                           const ConfusionMatrix& readout,
                           int iterations = 100);

/// Matrix pseudo-inverse baseline for cross-checks; may return negative
/// entries.
std::vector<double> unfold_pseudoinverse(const std::vector<double>& measured,
                                         const ConfusionMatrix& readout);

/// How the estimation-circuit output is turned into a fidelity 1 - p.
enum class FidelityMode { SigmaZLast, AllZerosProbability };

struct FoldFidelity {
  double one_minus_p = 1.0;
  double sem = 0.0;
  int instances = 0;
  bool clipped = false;  // mean fell outside (0, 1] and was clipped
};

/// Fold factor -> fidelity estimate.
using FidelityEstimate = std::map<int, FoldFidelity>;

constexpr double kFidelityFloor = 0.02;
constexpr double kMinFidelity = 1e-9;

/// Per-instance estimation-circuit values bucketed by fold factor, turned
/// into per-fold fidelity estimates. In SigmaZLast mode the values are the
/// sigma_z expectations on the last qubit; in AllZerosProbability mode they
/// are P(0...0) and get mapped through (P0 - 2^-n) / (1 - 2^-n), which needs
/// the qubit count `width`.
FidelityEstimate estimate_fidelity(
    const std::map<int, std::vector<double>>& per_fold_values,
    FidelityMode mode, int width = 0);

/// Invert global depolarizing: (noisy - c) / one_minus_p + c where c is
/// tr(O)/2^n. Throws std::domain_error when one_minus_p <= 0.
double correct_depolarizing(double noisy, double one_minus_p,
                            double trace_term);

struct ZnePoint {
  int fold = 1;
  double value = 0.0;
  double sem = 0.0;
};

struct ZneResult {
  double value = 0.0;
  double sem = 0.0;
};

/// Quadratic (three-point Lagrange) extrapolation to fold 0 from exactly the
/// fold factors 1, 3, 5. Uncertainties combine as sqrt(sum w_i^2 sem_i^2).
ZneResult zne_quadratic(std::span<const ZnePoint> points);

struct Aggregate {
  double mean = 0.0;
  double sd = 0.0;   // sample standard deviation, n - 1 denominator
  double sem = 0.0;
  int count = 0;
  bool single_sample = false;
};

/// Mean / sd / sem in a fixed left-to-right summation order so results do not
/// depend on scheduling.
Aggregate aggregate(std::span<const double> values);

struct MitigatedValue {
  double value = 0.0;
  double sem = 0.0;
  bool unreliable = false;  // some fold fidelity fell below the floor
  std::vector<ZnePoint> per_fold;  // corrected value and sem per fold factor
};

/// Full per-step combination: depolarizing-correct each fold's target mean by
/// its fidelity, propagate first-order uncertainties, then extrapolate the
/// fold series to zero. `trace_term` is tr(O)/2^n of the measured observable.
MitigatedValue mitigate(const std::map<int, Aggregate>& target_per_fold,
                        const FidelityEstimate& fidelity, double trace_term,
                        double fidelity_floor = kFidelityFloor);

}  // namespace qem
