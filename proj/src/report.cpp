// SPDX-License-Identifier: Apache-2.0
#include "qem/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace qem {

void write_text_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {
std::string num(double x) { return fmt::format("{:.17g}", x); }
}  // namespace

std::string comparison_csv(const ResultTable& table) {
  std::string s =
      "step,time,exact,original,original_sem,target_zne,target_zne_sem,"
      "mitigated,mitigated_sem,mitigated_sd,processed_instances,unreliable\n";
  for (const auto& row : table.rows) {
    if (!row.complete()) continue;
    s += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", row.step,
                     num(row.time), num(row.exact), num(row.original),
                     num(row.original_sem), num(row.target_zne.value),
                     num(row.target_zne.sem), num(row.mitigated.value),
                     num(row.mitigated.sem), num(row.processed_sd),
                     row.processed_instances,
                     row.mitigated.unreliable ? 1 : 0);
  }
  return s;
}

std::string fidelity_csv(const ResultTable& table) {
  std::string s = "step,fold,fidelity,sem,instances,clipped\n";
  for (const auto& row : table.rows)
    for (const auto& [fold, ff] : row.fidelity)
      s += fmt::format("{},{},{},{},{},{}\n", row.step, fold,
                       num(ff.one_minus_p), num(ff.sem), ff.instances,
                       ff.clipped ? 1 : 0);
  return s;
}

std::string target_by_fold_csv(const ResultTable& table) {
  std::string s = "step,fold,value,sem,instances\n";
  for (const auto& row : table.rows) {
    for (const auto& [fold, agg] : row.target_per_fold)
      s += fmt::format("{},{},{},{},{}\n", row.step, fold, num(agg.mean),
                       num(agg.sem), agg.count);
    if (row.has_zne)
      s += fmt::format("{},0,{},{},{}\n", row.step, num(row.target_zne.value),
                       num(row.target_zne.sem), 0);
  }
  return s;
}

std::string mitigated_by_fold_csv(const ResultTable& table) {
  std::string s = "step,fold,corrected,sem\n";
  for (const auto& row : table.rows) {
    if (!row.has_mitigated) continue;
    for (const auto& pt : row.mitigated.per_fold)
      s += fmt::format("{},{},{},{}\n", row.step, pt.fold, num(pt.value),
                       num(pt.sem));
    s += fmt::format("{},0,{},{}\n", row.step, num(row.mitigated.value),
                     num(row.mitigated.sem));
  }
  return s;
}

void write_reports(const std::string& dir, const ResultTable& table) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_text_file(dir + "/comparison.csv", comparison_csv(table));
  write_text_file(dir + "/fidelity_by_fold.csv", fidelity_csv(table));
  write_text_file(dir + "/target_by_fold.csv", target_by_fold_csv(table));
  write_text_file(dir + "/mitigated_by_fold.csv",
                  mitigated_by_fold_csv(table));
}

}  // namespace qem
