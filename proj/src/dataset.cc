// Copyright 2026 The wdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wdepth/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace wdepth {

namespace {

constexpr const char* kSchema = "v1";

[[noreturn]] void fail_line(int line, const std::string& what) {
  throw std::invalid_argument("dataset line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string_view to_string(ConfigKind kind) {
  switch (kind) {
    case ConfigKind::kCalibrate:
      return "CALIBRATE";
    case ConfigKind::kPopulation:
      return "POPULATION";
    case ConfigKind::kFidelity:
      return "FIDELITY";
    case ConfigKind::kThreePhoton:
      return "THREE_PHOTON";
  }
  return "UNKNOWN";
}

std::optional<ConfigKind> parse_config_kind(std::string_view name) {
  for (ConfigKind k : {ConfigKind::kCalibrate, ConfigKind::kPopulation, ConfigKind::kFidelity,
                       ConfigKind::kThreePhoton}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string AodConfig::label() const {
  std::string out(to_string(kind));
  if (indexed()) out += "_" + std::to_string(index);
  return out;
}

const std::vector<std::string>& event_labels(ConfigKind kind) {
  static const std::vector<std::string> calibrate{"I", "S", "SI"};
  static const std::vector<std::string> click{"click"};
  static const std::vector<std::string> three{"1", "12", "123", "13"};
  switch (kind) {
    case ConfigKind::kCalibrate:
      return calibrate;
    case ConfigKind::kPopulation:
    case ConfigKind::kFidelity:
      return click;
    case ConfigKind::kThreePhoton:
      return three;
  }
  return click;
}

std::string_view to_string(DatasetMode mode) {
  return mode == DatasetMode::kAnalytic ? "analytic" : "sampled";
}

double CountsRecord::count(const std::string& label) const {
  const auto it = counts.find(label);
  if (it == counts.end()) {
    throw std::invalid_argument("record " + config.label() + " has no event '" + label + "'");
  }
  return it->second;
}

const CountsRecord* CountsDataset::find(const AodConfig& config) const {
  for (const CountsRecord& r : records) {
    if (r.config == config) return &r;
  }
  return nullptr;
}

int CountsDataset::n_modes() const {
  int n = 0;
  for (const CountsRecord& r : records) n = std::max(n, r.config.index + 1);
  return n;
}

void CountsDataset::validate() const {
  for (const CountsRecord& r : records) {
    const std::string where = "record " + r.config.label() + ": ";
    if (r.config.indexed() ? r.config.index < 0 : r.config.index != -1) {
      throw std::invalid_argument(where + "bad ensemble index");
    }
    if (r.trials < 1) throw std::invalid_argument(where + "trials must be positive");
    const std::vector<std::string>& labels = event_labels(r.config.kind);
    if (r.counts.size() != labels.size()) {
      throw std::invalid_argument(where + "expected " + std::to_string(labels.size()) +
                                  " event labels");
    }
    for (const std::string& label : labels) {
      const auto it = r.counts.find(label);
      if (it == r.counts.end()) throw std::invalid_argument(where + "missing event " + label);
      const double c = it->second;
      if (!std::isfinite(c) || c < 0 || c > static_cast<double>(r.trials)) {
        throw std::invalid_argument(where + "count of " + label + " outside [0, trials]");
      }
      if (mode == DatasetMode::kSampled && c != std::floor(c)) {
        throw std::invalid_argument(where + "sampled count of " + label + " is not integral");
      }
    }
  }
}

void write_dataset(std::ostream& out, const CountsDataset& dataset) {
  for (const CountsRecord& r : dataset.records) {
    nlohmann::ordered_json j;
    j["schema"] = kSchema;
    j["config"] = std::string(to_string(r.config.kind));
    j["index"] = r.config.index;
    j["trials"] = r.trials;
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const auto& [label, c] : r.counts) {
      if (dataset.mode == DatasetMode::kSampled) {
        counts[label] = static_cast<std::int64_t>(c);
      } else {
        counts[label] = c;
      }
    }
    j["counts"] = counts;
    j["seed"] = r.seed;
    j["mode"] = std::string(to_string(dataset.mode));
    out << j.dump() << '\n';
  }
}

std::string dataset_to_string(const CountsDataset& dataset) {
  std::ostringstream out;
  write_dataset(out, dataset);
  return out.str();
}

CountsDataset read_dataset(std::istream& in) {
  CountsDataset dataset;
  std::optional<DatasetMode> mode;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail_line(number, std::string("malformed JSON: ") + e.what());
    }
    try {
      if (j.at("schema").get<std::string>() != kSchema) fail_line(number, "schema must be v1");
      CountsRecord r;
      const auto kind = parse_config_kind(j.at("config").get<std::string>());
      if (!kind) fail_line(number, "unknown config " + j.at("config").dump());
      r.config = AodConfig{*kind, j.at("index").get<int>()};
      r.trials = j.at("trials").get<std::int64_t>();
      for (const auto& [label, value] : j.at("counts").items()) {
        if (!value.is_number()) fail_line(number, "count of " + label + " is not a number");
        r.counts[label] = value.get<double>();
      }
      r.seed = j.at("seed").get<std::uint64_t>();
      const std::string m = j.at("mode").get<std::string>();
      DatasetMode this_mode;
      if (m == "sampled") {
        this_mode = DatasetMode::kSampled;
      } else if (m == "analytic") {
        this_mode = DatasetMode::kAnalytic;
      } else {
        fail_line(number, "unknown mode " + m);
      }
      if (mode && *mode != this_mode) fail_line(number, "mixed sampled and analytic records");
      mode = this_mode;
      dataset.records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      fail_line(number, std::string("bad field: ") + e.what());
    }
  }
  if (dataset.records.empty()) throw std::invalid_argument("dataset contains no records");
  dataset.mode = *mode;
  dataset.validate();
  return dataset;
}

CountsDataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open dataset " + path);
  return read_dataset(in);
}

}  // namespace wdepth
