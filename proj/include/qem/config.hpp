// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qem/mitigation.hpp"
#include "qem/simulator.hpp"
#include "qem/xx_model.hpp"

namespace qem {

/// Full experiment description, loadable from a key = value text file.
/// Unknown keys are rejected; missing keys keep their defaults.
struct ExperimentConfig {
  ModelParams model;

  double cnot_depolarizing = 0.0;
  double coherent_angle = 0.0;
  double global_depolarizing = 0.0;
  double readout_p01 = 0.0;  // P(read 1 | true 0), same on every qubit
  double readout_p10 = 0.0;  // P(read 0 | true 1)
  std::string readout_calibration;  // optional confusion-matrix json path

  int instances = 448;
  uint64_t shots = 8192;
  bool exact_expectation = false;
  std::vector<int> fold_factors{1, 3, 5};
  uint64_t master_seed = 1;
  int unfold_iterations = 100;
  FidelityMode fidelity_mode = FidelityMode::SigmaZLast;
  bool estimation_as_target = false;  // self-test: run estimation as target
  int workers = 0;                    // 0 = hardware concurrency
  std::string output_dir = "runs/out";

  void validate() const;
  /// Assembles the simulator noise model. Loads the calibration file when
  /// readout_calibration is set, else uses the uniform flip rates.
  NoiseModel noise() const;

  std::string to_text() const;
  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  void save(const std::string& path) const;
};

const char* fidelity_mode_name(FidelityMode mode);
FidelityMode fidelity_mode_from_name(const std::string& name);

}  // namespace qem
