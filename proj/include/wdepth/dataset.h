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

#ifndef WDEPTH_DATASET_H_
#define WDEPTH_DATASET_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wdepth {

// Deflector coupling configurations. CALIBRATE and POPULATION address one
// ensemble; FIDELITY and THREE_PHOTON use the collective idler mode.
enum class ConfigKind { kCalibrate, kPopulation, kFidelity, kThreePhoton };

std::string_view to_string(ConfigKind kind);
std::optional<ConfigKind> parse_config_kind(std::string_view name);

struct AodConfig {
  ConfigKind kind = ConfigKind::kFidelity;
  // Ensemble index for per-ensemble configurations, -1 otherwise.
  int index = -1;

  bool indexed() const { return kind == ConfigKind::kCalibrate || kind == ConfigKind::kPopulation; }
  std::string label() const;
  friend auto operator<=>(const AodConfig&, const AodConfig&) = default;
};

// Event labels carried by each configuration, in serialization order.
const std::vector<std::string>& event_labels(ConfigKind kind);

enum class DatasetMode { kSampled, kAnalytic };

std::string_view to_string(DatasetMode mode);

struct CountsRecord {
  AodConfig config;
  // Write pulses for CALIBRATE and THREE_PHOTON, heralds otherwise.
  std::int64_t trials = 0;
  // Integral in sampled mode; expected counts p * trials in analytic mode.
  std::map<std::string, double> counts;
  std::uint64_t seed = 0;

  double count(const std::string& label) const;
  double frequency(const std::string& label) const { return count(label) / trials; }
};

struct CountsDataset {
  DatasetMode mode = DatasetMode::kSampled;
  std::vector<CountsRecord> records;

  // First record with this configuration, or nullptr.
  const CountsRecord* find(const AodConfig& config) const;
  // Largest ensemble index seen plus one.
  int n_modes() const;
  // Throws std::invalid_argument on wrong labels, negative counts, counts
  // above trials, non-integral sampled counts or indices out of range.
  void validate() const;
};

// One JSON object per line, schema "v1".
void write_dataset(std::ostream& out, const CountsDataset& dataset);
std::string dataset_to_string(const CountsDataset& dataset);
// Throws std::invalid_argument with the offending line number.
CountsDataset read_dataset(std::istream& in);
CountsDataset read_dataset_file(const std::string& path);

}  // namespace wdepth

#endif  // WDEPTH_DATASET_H_
