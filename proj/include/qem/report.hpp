// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "qem/runner.hpp"

namespace qem {

/// Plot-ready CSV texts. Fold 0 rows in the by-fold tables carry the
/// extrapolated (fold -> 0) values. Incomplete steps are left out of the
/// comparison table and show up only through the columns they do have.
std::string comparison_csv(const ResultTable& table);
std::string fidelity_csv(const ResultTable& table);
std::string target_by_fold_csv(const ResultTable& table);
std::string mitigated_by_fold_csv(const ResultTable& table);

/// Writes the four tables into dir with fixed names: comparison.csv,
/// fidelity_by_fold.csv, target_by_fold.csv, mitigated_by_fold.csv.
void write_reports(const std::string& dir, const ResultTable& table);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace qem
