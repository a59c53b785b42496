// SPDX-License-Identifier: Apache-2.0
#include "qem/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "qem/report.hpp"
#include "qem/transforms.hpp"

namespace qem {

const char* fidelity_mode_name(FidelityMode mode) {
  switch (mode) {
    case FidelityMode::SigmaZLast: return "sigma_z_last";
    case FidelityMode::AllZerosProbability: return "all_zeros";
  }
  throw std::invalid_argument("unknown fidelity mode");
}

FidelityMode fidelity_mode_from_name(const std::string& name) {
  if (name == "sigma_z_last") return FidelityMode::SigmaZLast;
  if (name == "all_zeros") return FidelityMode::AllZerosProbability;
  throw std::invalid_argument(
      fmt::format("unknown fidelity mode '{}'", name));
}

void ExperimentConfig::validate() const {
  model.validate();
  if (instances < 1) throw std::invalid_argument("instances must be >= 1");
  if (!exact_expectation && shots < 1)
    throw std::invalid_argument("sampled mode needs shots >= 1");
  if (unfold_iterations < 1)
    throw std::invalid_argument("unfold_iterations must be >= 1");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
  if (fold_factors.empty())
    throw std::invalid_argument("fold_factors must not be empty");
  for (int f : fold_factors) (void)FoldFactor(f);
  std::vector<int> sorted = fold_factors;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("duplicate fold factor");
  if (output_dir.empty()) throw std::invalid_argument("output_dir empty");
  noise().validate();
}

NoiseModel ExperimentConfig::noise() const {
  NoiseModel nm;
  nm.cnot_depolarizing = cnot_depolarizing;
  nm.coherent_angle = coherent_angle;
  nm.global_depolarizing = global_depolarizing;
  if (!readout_calibration.empty()) {
    nm.readout =
        ConfusionMatrix::from_json_text(read_text_file(readout_calibration));
    if (nm.readout.width() != model.sites)
      throw std::invalid_argument("calibration width differs from chain");
  } else if (readout_p01 != 0.0 || readout_p10 != 0.0) {
    nm.readout =
        ConfusionMatrix::uniform_flip(model.sites, readout_p01, readout_p10);
  }
  return nm;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_bool(const std::string& v, int lineno) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::invalid_argument(
      fmt::format("config line {}: expected true/false, got '{}'", lineno, v));
}

double parse_double(const std::string& v, int lineno) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument(
        fmt::format("config line {}: bad number '{}'", lineno, v));
  }
}

long long parse_int(const std::string& v, int lineno) {
  try {
    size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw std::invalid_argument(
        fmt::format("config line {}: bad integer '{}'", lineno, v));
  }
}

uint64_t parse_uint(const std::string& v, int lineno) {
  try {
    size_t pos = 0;
    const unsigned long long i = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw std::invalid_argument(
        fmt::format("config line {}: bad integer '{}'", lineno, v));
  }
}

std::vector<int> parse_int_list(const std::string& v, int lineno) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty())
      out.push_back(static_cast<int>(parse_int(item, lineno)));
  }
  return out;
}

}  // namespace

std::string ExperimentConfig::to_text() const {
  std::string out;
  auto kv = [&](const char* k, const std::string& v) {
    out += fmt::format("{} = {}\n", k, v);
  };
  out += "# qem experiment configuration\n";
  kv("sites", fmt::format("{}", model.sites));
  kv("coupling", fmt::format("{:.17g}", model.coupling));
  kv("dt", fmt::format("{:.17g}", model.dt));
  kv("steps", fmt::format("{}", model.steps));
  kv("merge_half_steps", model.merge_half_steps ? "true" : "false");
  kv("cnot_depolarizing", fmt::format("{:.17g}", cnot_depolarizing));
  kv("coherent_angle", fmt::format("{:.17g}", coherent_angle));
  kv("global_depolarizing", fmt::format("{:.17g}", global_depolarizing));
  kv("readout_p01", fmt::format("{:.17g}", readout_p01));
  kv("readout_p10", fmt::format("{:.17g}", readout_p10));
  kv("readout_calibration", readout_calibration);
  kv("instances", fmt::format("{}", instances));
  kv("shots", fmt::format("{}", shots));
  kv("exact_expectation", exact_expectation ? "true" : "false");
  std::string folds;
  for (size_t i = 0; i < fold_factors.size(); ++i)
    folds += fmt::format("{}{}", i ? "," : "", fold_factors[i]);
  kv("fold_factors", folds);
  kv("master_seed", fmt::format("{}", master_seed));
  kv("unfold_iterations", fmt::format("{}", unfold_iterations));
  kv("fidelity_mode", fidelity_mode_name(fidelity_mode));
  kv("estimation_as_target", estimation_as_target ? "true" : "false");
  kv("workers", fmt::format("{}", workers));
  kv("output_dir", output_dir);
  return out;
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(
          fmt::format("config line {}: expected key = value", lineno));
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));

    if (key == "sites") cfg.model.sites = static_cast<int>(parse_int(val, lineno));
    else if (key == "coupling") cfg.model.coupling = parse_double(val, lineno);
    else if (key == "dt") cfg.model.dt = parse_double(val, lineno);
    else if (key == "steps") cfg.model.steps = static_cast<int>(parse_int(val, lineno));
    else if (key == "merge_half_steps") cfg.model.merge_half_steps = parse_bool(val, lineno);
    else if (key == "cnot_depolarizing") cfg.cnot_depolarizing = parse_double(val, lineno);
    else if (key == "coherent_angle") cfg.coherent_angle = parse_double(val, lineno);
    else if (key == "global_depolarizing") cfg.global_depolarizing = parse_double(val, lineno);
    else if (key == "readout_p01") cfg.readout_p01 = parse_double(val, lineno);
    else if (key == "readout_p10") cfg.readout_p10 = parse_double(val, lineno);
    else if (key == "readout_calibration") cfg.readout_calibration = val;
    else if (key == "instances") cfg.instances = static_cast<int>(parse_int(val, lineno));
    else if (key == "shots") cfg.shots = parse_uint(val, lineno);
    else if (key == "exact_expectation") cfg.exact_expectation = parse_bool(val, lineno);
    else if (key == "fold_factors") cfg.fold_factors = parse_int_list(val, lineno);
    else if (key == "master_seed") cfg.master_seed = parse_uint(val, lineno);
    else if (key == "unfold_iterations") cfg.unfold_iterations = static_cast<int>(parse_int(val, lineno));
    else if (key == "fidelity_mode") cfg.fidelity_mode = fidelity_mode_from_name(val);
    else if (key == "estimation_as_target") cfg.estimation_as_target = parse_bool(val, lineno);
    else if (key == "workers") cfg.workers = static_cast<int>(parse_int(val, lineno));
    else if (key == "output_dir") cfg.output_dir = val;
    else
      throw std::invalid_argument(
          fmt::format("config line {}: unknown key '{}'", lineno, key));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  return from_text(read_text_file(path));
}

void ExperimentConfig::save(const std::string& path) const {
  write_text_file(path, to_text());
}

}  // namespace qem
