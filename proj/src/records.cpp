// SPDX-License-Identifier: Apache-2.0
#include "qem/records.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qem/rng.hpp"

namespace qem {

const char* cell_kind_name(CellKind kind) {
  switch (kind) {
    case CellKind::Target: return "target";
    case CellKind::Estimation: return "estimation";
    case CellKind::Original: return "original";
  }
  throw std::invalid_argument("unknown cell kind");
}

CellKind cell_kind_from_name(const std::string& name) {
  if (name == "target") return CellKind::Target;
  if (name == "estimation") return CellKind::Estimation;
  if (name == "original") return CellKind::Original;
  throw std::invalid_argument(fmt::format("unknown cell kind '{}'", name));
}

namespace {
uint64_t pack_key(const RecordKey& key, int kind_id) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(key.step)) << 40) |
         (static_cast<uint64_t>(static_cast<uint8_t>(key.fold)) << 32) |
         (static_cast<uint64_t>(static_cast<uint32_t>(key.instance)) << 8) |
         static_cast<uint64_t>(kind_id);
}
}  // namespace

uint64_t cell_seed(uint64_t master, const RecordKey& key) {
  return mix64(mix64(master) ^ pack_key(key, static_cast<int>(key.kind)));
}

uint64_t derivation_seed(uint64_t master, int step) {
  RecordKey key;
  key.step = step;
  key.fold = 0;
  key.instance = 0;
  return mix64(mix64(master) ^ pack_key(key, 3));
}

uint64_t twirl_seed(uint64_t cell) { return mix64(cell ^ 0x7477696c); }

uint64_t sampling_seed(uint64_t cell) { return mix64(cell ^ 0x73686f74); }

std::string record_to_json(const RunRecord& record) {
  nlohmann::ordered_json j;
  j["step"] = record.key.step;
  j["fold"] = record.key.fold;
  j["instance"] = record.key.instance;
  j["kind"] = cell_kind_name(record.key.kind);
  j["seed"] = record.seed;
  j["raw"] = record.raw;
  j["value"] = record.value;
  j["all_zeros"] = record.all_zeros;
  if (record.counts.shots > 0) {
    j["shots"] = record.counts.shots;
    nlohmann::ordered_json c = nlohmann::ordered_json::object();
    for (const auto& [outcome, n] : record.counts.counts)
      c[outcome_bits(outcome, record.counts.width)] = n;
    j["counts"] = std::move(c);
  }
  return j.dump();
}

namespace {
RunRecord record_from_parsed(const nlohmann::json& j);
}

RunRecord record_from_json(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(e.what());
  }
  try {
    return record_from_parsed(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

namespace {
RunRecord record_from_parsed(const nlohmann::json& j) {
  RunRecord r;
  r.key.step = j.at("step").get<int>();
  r.key.fold = j.at("fold").get<int>();
  r.key.instance = j.at("instance").get<int>();
  r.key.kind = cell_kind_from_name(j.at("kind").get<std::string>());
  r.seed = j.at("seed").get<uint64_t>();
  r.raw = j.at("raw").get<double>();
  r.value = j.at("value").get<double>();
  r.all_zeros = j.at("all_zeros").get<double>();
  if (j.contains("counts")) {
    r.counts.shots = j.at("shots").get<uint64_t>();
    uint64_t total = 0;
    int width = 0;
    for (const auto& [bits, n] : j.at("counts").items()) {
      r.counts.counts[outcome_from_bits(bits)] = n.get<uint64_t>();
      width = static_cast<int>(bits.size());
      total += n.get<uint64_t>();
    }
    r.counts.width = width;
    if (total != r.counts.shots)
      throw std::invalid_argument("record counts do not sum to shots");
  }
  return r;
}
}  // namespace

void save_records(const std::string& path,
                  const std::vector<RunRecord>& records) {
  std::vector<const RunRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const RunRecord* a, const RunRecord* b) {
              return a->key < b->key;
            });
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    for (const RunRecord* r : sorted) out << record_to_json(*r) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

std::vector<RunRecord> load_records(const std::string& path) {
  std::vector<RunRecord> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(line));
    } catch (const std::exception& e) {
      throw std::invalid_argument(
          fmt::format("{} line {}: {}", path, lineno, e.what()));
    }
  }
  return out;
}

}  // namespace qem
