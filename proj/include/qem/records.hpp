// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "qem/simulator.hpp"

namespace qem {

/// What a work cell simulated. Target and estimation cells are
/// randomized-compiled and folded; the original cell is the bare fold-1
/// target circuit that feeds the unmitigated baseline.
enum class CellKind { Target = 0, Estimation = 1, Original = 2 };

const char* cell_kind_name(CellKind kind);
CellKind cell_kind_from_name(const std::string& name);

struct RecordKey {
  int step = 0;
  int fold = 1;
  int instance = 0;
  CellKind kind = CellKind::Target;

  auto operator<=>(const RecordKey&) const = default;
};

/// One simulated cell. `raw` is the readout-corrupted sigma_z expectation on
/// the last qubit before unfolding; `value` the unfolded one; `all_zeros` the
/// unfolded probability of |0...0>. Counts are kept in sampled mode only.
struct RunRecord {
  RecordKey key;
  uint64_t seed = 0;
  double raw = 0.0;
  double value = 0.0;
  double all_zeros = 0.0;
  CountHistogram counts;

  bool sampled() const { return counts.shots > 0; }
};

/// Seed derivation: bijective mixing of the master seed with the packed key,
/// injective over steps < 2^24, folds < 2^8, instances < 2^24.
uint64_t cell_seed(uint64_t master, const RecordKey& key);
/// Stream used to derive the per-step estimation circuit (one per step).
uint64_t derivation_seed(uint64_t master, int step);
/// Independent sub-streams of a cell seed.
uint64_t twirl_seed(uint64_t cell);
uint64_t sampling_seed(uint64_t cell);

std::string record_to_json(const RunRecord& record);
RunRecord record_from_json(const std::string& line);

/// Line-delimited records, sorted by key, written atomically.
void save_records(const std::string& path,
                  const std::vector<RunRecord>& records);
/// Missing file loads as an empty vector.
std::vector<RunRecord> load_records(const std::string& path);

}  // namespace qem
