// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "qem/circuit.hpp"
#include "qem/config.hpp"
#include "qem/report.hpp"
#include "qem/runner.hpp"
#include "qem/transforms.hpp"

namespace fs = std::filesystem;

namespace {

void print_table(const qem::ResultTable& table) {
  fmt::print("{:>4} {:>7} {:>9} {:>9} {:>9} {:>9} {:>9}\n", "step", "time",
             "exact", "original", "zne", "mitigated", "sem");
  for (const auto& row : table.rows) {
    if (!row.complete()) {
      fmt::print("{:>4} {:>7.3f} {:>9.5f}  (incomplete)\n", row.step, row.time,
                 row.exact);
      continue;
    }
    fmt::print("{:>4} {:>7.3f} {:>9.5f} {:>9.5f} {:>9.5f} {:>9.5f} {:>9.5f}\n",
               row.step, row.time, row.exact, row.original,
               row.target_zne.value, row.mitigated.value, row.mitigated.sem);
  }
}

int do_run(qem::ExperimentConfig cfg) {
  const qem::RunOutcome out = qem::run(cfg);
  fmt::print("computed {} cells, reused {}\n", out.computed_cells,
             out.reused_cells);
  print_table(out.table);
  fmt::print("tables written to {}\n", cfg.output_dir);
  if (!out.failures.empty()) {
    fmt::print(stderr, "{} cells failed; see {}/failures.log\n",
               out.failures.size(), cfg.output_dir);
    return 1;
  }
  return 0;
}

bool check(bool ok, const std::string& what) {
  fmt::print("{}: {}\n", ok ? "PASS" : "FAIL", what);
  return ok;
}

int do_selftest(const std::string& dir) {
  bool all = true;

  // Twirl rows dress CNOT into CNOT up to phase.
  {
    qem::Circuit plain(2);
    plain.append(qem::Gate::cnot(0, 1));
    const Eigen::MatrixXcd cnot = qem::circuit_unitary(plain);
    bool ok = true;
    for (const auto& row : qem::twirl_table()) {
      const Eigen::MatrixXcd dressed =
          kroneckerProduct(qem::pauli_matrix(row.q), qem::pauli_matrix(row.p))
              .eval() *
          cnot *
          kroneckerProduct(qem::pauli_matrix(row.s), qem::pauli_matrix(row.r))
              .eval();
      ok = ok && qem::approx_equal_up_to_phase(dressed, cnot, 1e-12);
    }
    all &= check(ok, "twirl table dresses CNOT to CNOT up to phase");
  }

  // Noiseless pipeline reproduces the exact curve.
  {
    qem::ExperimentConfig cfg;
    cfg.model.sites = 4;
    cfg.model.steps = 3;
    cfg.instances = 4;
    cfg.exact_expectation = true;
    cfg.master_seed = 11;
    cfg.output_dir = dir + "/noiseless";
    fs::remove(cfg.output_dir + "/records.jsonl");
    const qem::RunOutcome out = qem::run(cfg);
    bool ok = out.failures.empty();
    for (const auto& row : out.table.rows) {
      ok = ok && row.complete();
      if (!row.complete()) continue;
      ok = ok && std::abs(row.original - row.exact) < 1e-9;
      ok = ok && std::abs(row.target_zne.value - row.exact) < 1e-9;
      ok = ok && std::abs(row.mitigated.value - row.exact) < 1e-9;
    }
    all &= check(ok, "noiseless run matches the exact curve at 1e-9");
  }

  // Estimation-as-target self-division lands on 1.
  {
    qem::ExperimentConfig cfg;
    cfg.model.sites = 4;
    cfg.model.steps = 3;
    cfg.instances = 16;
    cfg.exact_expectation = true;
    cfg.cnot_depolarizing = 0.01;
    cfg.coherent_angle = 0.02;
    cfg.estimation_as_target = true;
    cfg.master_seed = 12;
    cfg.output_dir = dir + "/self-division";
    fs::remove(cfg.output_dir + "/records.jsonl");
    const qem::RunOutcome out = qem::run(cfg);
    bool ok = out.failures.empty();
    for (const auto& row : out.table.rows) {
      ok = ok && row.complete() &&
           std::abs(row.mitigated.value - 1.0) < 0.05;
      for (const auto& [fold, ff] : row.fidelity)
        ok = ok && ff.one_minus_p > 0.0 && ff.one_minus_p <= 1.0;
    }
    all &= check(ok, "estimation self-division mitigates to 1.0");
  }

  fmt::print("{}\n", all ? "selftest passed" : "selftest FAILED");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Depolarizing-noise mitigation on a Trotterized XX chain: "
      "noise-estimation circuits, randomized compiling, CNOT folding "
      "and readout unfolding"};
  app.require_subcommand(1);

  std::string config_path, output, run_dir, calib_out;
  int workers = -1;
  int instances = -1;
  int steps = -1;
  uint64_t seed = 0;
  bool have_seed = false;
  uint64_t shots = 0;
  bool exact = false;
  bool full = false;

  auto* run_cmd =
      app.add_subcommand("run", "Execute the sweep and write result tables");
  run_cmd->add_option("--config", config_path, "configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--output", output, "output directory override");
  run_cmd->add_option("--workers", workers, "worker thread count (0 = auto)");
  run_cmd->add_option("--seed", seed, "master seed override")
      ->each([&](const std::string&) { have_seed = true; });
  run_cmd->add_option("--shots", shots, "shots override (enables sampling)");
  run_cmd->add_option("--instances", instances, "instance count override");
  run_cmd->add_option("--steps", steps, "step count override");
  run_cmd->add_flag("--exact", exact, "exact-expectation mode");

  auto* calib_cmd = app.add_subcommand(
      "calibrate", "Measure the readout confusion matrix");
  calib_cmd->add_option("--config", config_path, "configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  calib_cmd->add_option("--output", calib_out, "confusion json path")
      ->required();
  calib_cmd->add_flag("--full", full, "also write the dense 2^n response");
  calib_cmd->add_option("--shots", shots, "shots override");

  auto* report_cmd = app.add_subcommand(
      "report", "Rebuild result tables from persisted records");
  report_cmd->add_option("--run", run_dir, "run directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  report_cmd->add_option("--config", config_path,
                         "config override (default: resolved config in the "
                         "run directory)");

  auto* self_cmd = app.add_subcommand("selftest", "Quick internal checks");
  self_cmd->add_option("--output", output, "scratch directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      qem::ExperimentConfig cfg = qem::ExperimentConfig::load(config_path);
      if (!output.empty()) cfg.output_dir = output;
      if (workers >= 0) cfg.workers = workers;
      if (have_seed) cfg.master_seed = seed;
      if (instances > 0) cfg.instances = instances;
      if (steps >= 0) cfg.model.steps = steps;
      if (shots > 0) {
        cfg.shots = shots;
        cfg.exact_expectation = false;
      }
      if (exact) cfg.exact_expectation = true;
      return do_run(cfg);
    }
    if (calib_cmd->parsed()) {
      qem::ExperimentConfig cfg = qem::ExperimentConfig::load(config_path);
      if (shots > 0) cfg.shots = shots;
      const qem::ConfusionMatrix cm = qem::calibrate_per_qubit(cfg);
      qem::write_text_file(calib_out, cm.to_json_text());
      fmt::print("wrote {}\n", calib_out);
      if (full) {
        const Eigen::MatrixXd r = qem::calibrate_full(cfg);
        std::string txt;
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
          for (Eigen::Index j = 0; j < r.cols(); ++j)
            txt += fmt::format("{}{:.17g}", j ? "," : "", r(i, j));
          txt += '\n';
        }
        const std::string path = calib_out + ".full.csv";
        qem::write_text_file(path, txt);
        fmt::print("wrote {}\n", path);
      }
      return 0;
    }
    if (report_cmd->parsed()) {
      const std::string cfg_path = config_path.empty()
                                       ? run_dir + "/config.resolved.cfg"
                                       : config_path;
      qem::ExperimentConfig cfg = qem::ExperimentConfig::load(cfg_path);
      const auto records = qem::load_records(run_dir + "/records.jsonl");
      const qem::ResultTable table = qem::build_table(cfg, records);
      qem::write_reports(run_dir, table);
      print_table(table);
      fmt::print("tables written to {}\n", run_dir);
      return 0;
    }
    if (self_cmd->parsed()) {
      const std::string dir =
          output.empty() ? (fs::temp_directory_path() / "qem-selftest").string()
                         : output;
      return do_selftest(dir);
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
