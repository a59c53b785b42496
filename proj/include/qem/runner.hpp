// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qem/config.hpp"
#include "qem/mitigation.hpp"
#include "qem/records.hpp"

namespace qem {

struct CellFailure {
  RecordKey key;
  std::string message;
};

/// Everything the report tables need for one time step.
struct StepRow {
  int step = 0;
  double time = 0.0;
  double exact = 0.0;  // trotterized noiseless oracle

  bool has_original = false;
  double original = 0.0;
  double original_sem = 0.0;

  std::map<int, Aggregate> target_per_fold;  // unfolded target expectations
  FidelityEstimate fidelity;

  bool has_zne = false;
  ZneResult target_zne;  // extrapolation of the uncorrected target means

  bool has_mitigated = false;
  MitigatedValue mitigated;
  double processed_sd = 0.0;  // sd of per-instance mitigated values
  int processed_instances = 0;

  bool complete() const { return has_original && has_zne && has_mitigated; }
};

struct ResultTable {
  std::vector<StepRow> rows;
};

struct RunOutcome {
  ResultTable table;
  std::vector<CellFailure> failures;
  int computed_cells = 0;
  int reused_cells = 0;
};

/// Full sweep: builds circuits, simulates every missing (step, fold,
/// instance, kind) cell with a worker pool, persists records, and writes the
/// four report tables plus the resolved config into config.output_dir.
/// Deterministic for a fixed config and master seed regardless of worker
/// count; cells already in records.jsonl are reused, not recomputed.
RunOutcome run(const ExperimentConfig& config);

/// Aggregate persisted records into per-step rows. Incomplete steps keep
/// their partial fields; failures lists cells that could not be aggregated.
ResultTable build_table(const ExperimentConfig& config,
                        const std::vector<RunRecord>& records);

/// Readout calibration through the sampling pipeline: prepares basis states,
/// measures with the config's noise, estimates per-qubit flip matrices.
ConfusionMatrix calibrate_per_qubit(const ExperimentConfig& config);
/// Full 2^n response estimate (column = prepared state).
Eigen::MatrixXd calibrate_full(const ExperimentConfig& config);

}  // namespace qem
