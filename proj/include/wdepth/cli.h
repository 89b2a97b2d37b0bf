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

#ifndef WDEPTH_CLI_H_
#define WDEPTH_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wdepth/bootstrap.h"
#include "wdepth/dataset.h"
#include "wdepth/simulator.h"
#include "wdepth/witness.h"

namespace wdepth {

// Exit codes shared by every command.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitAnalysisFailure = 1;
inline constexpr int kExitInputError = 2;

// Contents of a `key = value` run configuration. The seed is mandatory so
// that no command falls back to an entropy source.
struct RunConfig {
  std::string schema_version = "v1";
  std::uint64_t seed = 0;
  ExperimentModel model;
  DatasetMode mode = DatasetMode::kSampled;
  SearchOptions search;
  // Feasibility slack for validate-witness.
  double slack = 1e-3;
  int n_samples = 10'000;
  WitnessSector sector = WitnessSector::kSpinCorrected;
  bool reoptimize = false;
  int threads = 0;
  std::string output;
};

// Throws std::invalid_argument on unknown keys, a wrong schema version, a
// missing seed or an invalid model. Model keys are optional only when
// `require_model` is false.
RunConfig load_run_config(const std::string& path, bool require_model);
RunConfig parse_run_config(std::istream& in, const std::string& source, bool require_model);

// Command-line values after flag parsing. Unset optionals defer to the
// configuration file.
struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> slack;
  std::optional<int> samples;
  bool reoptimize = false;
  std::optional<int> n;
  std::vector<std::string> inputs;
};

// Each command writes its primary output to options.out when set and to
// `out` otherwise; diagnostics go to `err`. They throw on failure and leave
// the mapping to exit codes to run_command.
int cmd_validate_witness(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_infer(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_certify(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_report(const CliOptions& options, std::ostream& out, std::ostream& err);

// Dispatches `command` and converts exceptions into exit codes: AnalysisError
// to 1, input and I/O errors to 2.
int run_command(const std::string& command, const CliOptions& options, std::ostream& out,
                std::ostream& err);

// Full argument parsing; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Histogram of values in 100 equal-width bins spanning [min, max] as CSV
// rows `bin,lo,hi,count`. The maximum falls in the last bin; a degenerate
// range is widened to [v - 0.5, v + 0.5].
std::string histogram_csv(const std::vector<double>& values);

}  // namespace wdepth

#endif  // WDEPTH_CLI_H_
