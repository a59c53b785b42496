// SPDX-License-Identifier: Apache-2.0
#include "qem/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

#include <fmt/format.h>

#include "qem/report.hpp"
#include "qem/rng.hpp"
#include "qem/transforms.hpp"

namespace qem {

namespace {

struct StepCircuits {
  Circuit target;
  Circuit estimation;

  StepCircuits() : target(1), estimation(1) {}
};

std::vector<StepCircuits> build_step_circuits(const ExperimentConfig& cfg) {
  const int n = cfg.model.sites;
  std::vector<StepCircuits> out(static_cast<size_t>(cfg.model.steps) + 1);
  const Circuit prep = domain_wall_prep(n);
  for (int k = 0; k <= cfg.model.steps; ++k) {
    ModelParams p = cfg.model;
    p.steps = k;
    Circuit target(n);
    target.extend(prep);
    target.extend(trotter_circuit(p));
    Circuit est = derive_estimation_circuit(
        target, derivation_seed(cfg.master_seed, k));
    if (cfg.estimation_as_target) target = est;
    out[k].target = std::move(target);
    out[k].estimation = std::move(est);
  }
  return out;
}

RunRecord compute_cell(const ExperimentConfig& cfg, const NoiseModel& noise,
                       const Observable& mz, const StepCircuits& sc,
                       const RecordKey& key) {
  RunRecord rec;
  rec.key = key;
  const uint64_t cseed = cell_seed(cfg.master_seed, key);
  rec.seed = cseed;

  Circuit circ(cfg.model.sites);
  if (key.kind == CellKind::Original) {
    circ = sc.target;
  } else {
    const Circuit& base =
        key.kind == CellKind::Target ? sc.target : sc.estimation;
    circ = fold_cnots(randomized_compile(base, twirl_seed(cseed)),
                      FoldFactor(key.fold));
  }

  const DensityMatrix rho = simulate_density(circ, noise);
  const bool corrupting =
      noise.readout.width() != 0 && !noise.readout.trivial();

  std::vector<double> observed;
  if (cfg.exact_expectation) {
    observed = outcome_distribution(rho);
    if (corrupting) observed = noise.readout.apply(observed);
  } else {
    rec.counts =
        sample_counts(rho, cfg.shots, noise.readout, sampling_seed(cseed));
    observed = rec.counts.distribution();
  }
  rec.raw = expectation(observed, mz);
  const std::vector<double> unfolded =
      corrupting ? unfold(observed, noise.readout, cfg.unfold_iterations)
                 : observed;
  rec.value = expectation(unfolded, mz);
  rec.all_zeros = unfolded[0];
  return rec;
}

double instance_fidelity(const RunRecord& rec, FidelityMode mode, int width) {
  if (mode == FidelityMode::SigmaZLast) return rec.value;
  const double floor_p = 1.0 / static_cast<double>(uint64_t{1} << width);
  return (rec.all_zeros - floor_p) / (1.0 - floor_p);
}

}  // namespace

RunOutcome run(const ExperimentConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);

  const NoiseModel noise = cfg.noise();
  const Observable mz = magnetization_observable(cfg.model.sites);
  const std::vector<StepCircuits> step_circuits = build_step_circuits(cfg);

  const std::string records_path = cfg.output_dir + "/records.jsonl";
  std::map<RecordKey, RunRecord> store;
  for (auto& r : load_records(records_path)) {
    const RecordKey key = r.key;
    store[key] = std::move(r);
  }

  RunOutcome out;
  std::vector<RecordKey> jobs;
  for (int k = 0; k <= cfg.model.steps; ++k) {
    for (int f : cfg.fold_factors)
      for (CellKind kind : {CellKind::Target, CellKind::Estimation})
        for (int i = 0; i < cfg.instances; ++i) {
          RecordKey key;
          key.step = k;
          key.fold = f;
          key.instance = i;
          key.kind = kind;
          if (store.contains(key))
            ++out.reused_cells;
          else
            jobs.push_back(key);
        }
    RecordKey okey;
    okey.step = k;
    okey.fold = 1;
    okey.instance = 0;
    okey.kind = CellKind::Original;
    if (store.contains(okey))
      ++out.reused_cells;
    else
      jobs.push_back(okey);
  }

  std::vector<RunRecord> results(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<size_t> next{0};
  std::atomic<size_t> done{0};
  unsigned nw = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                : std::max(1u, std::thread::hardware_concurrency());
  nw = static_cast<unsigned>(
      std::min<size_t>(nw, std::max<size_t>(jobs.size(), 1)));

  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[i] =
            compute_cell(cfg, noise, mz, step_circuits[jobs[i].step], jobs[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what()[0] ? e.what() : "unknown error";
      }
      const size_t d = done.fetch_add(1) + 1;
      if (d % 1000 == 0 || d == jobs.size())
        fmt::print(stderr, "  simulated {}/{} cells\n", d, jobs.size());
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nw; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i].empty()) {
      out.failures.push_back({jobs[i], errors[i]});
    } else {
      store[jobs[i]] = std::move(results[i]);
      ++out.computed_cells;
    }
  }
  std::sort(out.failures.begin(), out.failures.end(),
            [](const CellFailure& a, const CellFailure& b) {
              return a.key < b.key;
            });

  std::vector<RunRecord> all;
  all.reserve(store.size());
  for (const auto& [key, rec] : store) all.push_back(rec);
  save_records(records_path, all);
  cfg.save(cfg.output_dir + "/config.resolved.cfg");

  out.table = build_table(cfg, all);
  write_reports(cfg.output_dir, out.table);

  if (!out.failures.empty()) {
    std::string log;
    for (const auto& f : out.failures)
      log += fmt::format("step {} fold {} instance {} {}: {}\n", f.key.step,
                         f.key.fold, f.key.instance,
                         cell_kind_name(f.key.kind), f.message);
    write_text_file(cfg.output_dir + "/failures.log", log);
  }
  return out;
}

ResultTable build_table(const ExperimentConfig& cfg,
                        const std::vector<RunRecord>& records) {
  std::map<RecordKey, const RunRecord*> idx;
  for (const auto& r : records) idx[r.key] = &r;
  const int n = cfg.model.sites;
  const Observable mz = magnetization_observable(n);

  // All three fold factors must be present for extrapolation.
  const bool can_zne = [&] {
    std::vector<int> f = cfg.fold_factors;
    std::sort(f.begin(), f.end());
    return f == std::vector<int>{1, 3, 5};
  }();

  ResultTable table;
  for (int k = 0; k <= cfg.model.steps; ++k) {
    StepRow row;
    row.step = k;
    row.time = k * cfg.model.dt;
    row.exact = cfg.estimation_as_target
                    ? 1.0
                    : exact_magnetization(cfg.model, row.time, true);

    RecordKey okey;
    okey.step = k;
    okey.fold = 1;
    okey.instance = 0;
    okey.kind = CellKind::Original;
    if (const auto it = idx.find(okey); it != idx.end()) {
      const RunRecord& rec = *it->second;
      row.has_original = true;
      row.original = rec.raw;
      row.original_sem =
          rec.sampled()
              ? std::sqrt(std::max(0.0, 1.0 - rec.raw * rec.raw) /
                          static_cast<double>(rec.counts.shots))
              : 0.0;
    }

    std::map<int, std::vector<double>> est_values;
    bool folds_complete = true;
    for (int f : cfg.fold_factors) {
      std::vector<double> tvals, evals;
      tvals.reserve(cfg.instances);
      evals.reserve(cfg.instances);
      for (int i = 0; i < cfg.instances; ++i) {
        RecordKey key;
        key.step = k;
        key.fold = f;
        key.instance = i;
        key.kind = CellKind::Target;
        if (const auto it = idx.find(key); it != idx.end())
          tvals.push_back(it->second->value);
        key.kind = CellKind::Estimation;
        if (const auto it = idx.find(key); it != idx.end())
          evals.push_back(
              instance_fidelity(*it->second, cfg.fidelity_mode, n));
      }
      if (tvals.empty() || evals.empty()) {
        folds_complete = false;
        continue;
      }
      row.target_per_fold[f] = aggregate(tvals);
      est_values[f] = std::move(evals);
    }

    if (folds_complete && !est_values.empty()) {
      // estimate_fidelity consumes already-converted values.
      row.fidelity =
          estimate_fidelity(est_values, FidelityMode::SigmaZLast, n);
      if (can_zne) {
        std::vector<ZnePoint> pts;
        for (const auto& [f, agg] : row.target_per_fold) {
          ZnePoint pt;
          pt.fold = f;
          pt.value = agg.mean;
          pt.sem = agg.sem;
          pts.push_back(pt);
        }
        row.target_zne = zne_quadratic(pts);
        row.has_zne = true;
        row.mitigated =
            mitigate(row.target_per_fold, row.fidelity, mz.constant);
        row.has_mitigated = true;

        // Per-instance processing for the scatter of the mitigated series.
        std::vector<double> processed;
        processed.reserve(cfg.instances);
        for (int i = 0; i < cfg.instances; ++i) {
          std::vector<ZnePoint> ipts;
          bool ok = true;
          for (int f : cfg.fold_factors) {
            RecordKey tk, ek;
            tk.step = ek.step = k;
            tk.fold = ek.fold = f;
            tk.instance = ek.instance = i;
            tk.kind = CellKind::Target;
            ek.kind = CellKind::Estimation;
            const auto ti = idx.find(tk), ei = idx.find(ek);
            if (ti == idx.end() || ei == idx.end()) {
              ok = false;
              break;
            }
            const double fid =
                instance_fidelity(*ei->second, cfg.fidelity_mode, n);
            if (fid <= kMinFidelity) {
              ok = false;
              break;
            }
            ZnePoint pt;
            pt.fold = f;
            pt.value = correct_depolarizing(ti->second->value, fid, mz.constant);
            ipts.push_back(pt);
          }
          if (ok) processed.push_back(zne_quadratic(ipts).value);
        }
        if (processed.size() >= 2) {
          const Aggregate pa = aggregate(processed);
          row.processed_sd = pa.sd;
          row.processed_instances = pa.count;
        }
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ConfusionMatrix calibrate_per_qubit(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = cfg.model.sites;
  const NoiseModel noise = cfg.noise();
  const uint64_t shots = cfg.shots;

  Circuit zeros(n);
  Circuit ones(n);
  for (int q = 0; q < n; ++q) ones.append(Gate::x(q));

  ConfusionMatrix cm = ConfusionMatrix::ideal(n);
  Eigen::VectorXd p01(n), p10(n);
  int which = 0;
  for (const Circuit* c : {&zeros, &ones}) {
    const DensityMatrix rho = simulate_density(*c, noise);
    const CountHistogram hist = sample_counts(
        rho, shots, noise.readout,
        mix64(mix64(cfg.master_seed) ^ (0xca11b000ull + which)));
    Eigen::VectorXd flipped = Eigen::VectorXd::Zero(n);
    for (const auto& [outcome, count] : hist.counts)
      for (int q = 0; q < n; ++q) {
        const int bit = static_cast<int>((outcome >> q) & 1);
        if (bit != which) flipped(q) += static_cast<double>(count);
      }
    flipped /= static_cast<double>(shots);
    if (which == 0)
      p01 = flipped;
    else
      p10 = flipped;
    ++which;
  }
  for (int q = 0; q < n; ++q) {
    Eigen::Matrix2d m;
    m << 1.0 - p01(q), p10(q), p01(q), 1.0 - p10(q);
    cm.set_qubit(q, m);
  }
  return cm;
}

Eigen::MatrixXd calibrate_full(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = cfg.model.sites;
  if (n > 10) throw std::invalid_argument("full calibration capped at 10 qubits");
  const NoiseModel noise = cfg.noise();
  const size_t dim = size_t{1} << n;
  Eigen::MatrixXd response = Eigen::MatrixXd::Zero(dim, dim);
  for (size_t state = 0; state < dim; ++state) {
    Circuit c(n);
    for (int q = 0; q < n; ++q)
      if ((state >> q) & 1) c.append(Gate::x(q));
    const DensityMatrix rho = simulate_density(c, noise);
    const CountHistogram hist = sample_counts(
        rho, cfg.shots, noise.readout,
        mix64(mix64(cfg.master_seed) ^ (0xf011ca1ull + state)));
    for (const auto& [outcome, count] : hist.counts)
      response(outcome, state) =
          static_cast<double>(count) / static_cast<double>(cfg.shots);
  }
  return response;
}

}  // namespace qem
