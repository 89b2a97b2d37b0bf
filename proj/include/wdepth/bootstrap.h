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

#ifndef WDEPTH_BOOTSTRAP_H_
#define WDEPTH_BOOTSTRAP_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wdepth/dataset.h"
#include "wdepth/population.h"
#include "wdepth/witness.h"

namespace wdepth {

// Replaces every count by a Poisson draw with the observed count as mean.
// Trials are unchanged. Deterministic in seed.
CountsDataset resample(const CountsDataset& dataset, std::uint64_t seed);

// Which populations enter the witness.
enum class WitnessSector { kSpinCorrected, kSpinRaw, kPhotonic };

const Populations& select_populations(const PopulationEstimate& raw,
                                      const PopulationEstimate& corrected, WitnessSector sector);

struct BootstrapOptions {
  int n_samples = 10'000;
  std::uint64_t seed = 0;
  WitnessSector sector = WitnessSector::kSpinCorrected;
  // Re-optimize (alpha, beta, gamma) on every resample instead of holding the
  // supplied parameters fixed.
  bool reoptimize = false;
  SearchOptions search;
  int expected_modes = 0;
  // 0 selects the hardware concurrency.
  int threads = 0;
};

struct BootstrapSample {
  PopulationEstimate raw;
  PopulationEstimate corrected;
  WitnessParams params;
  double witness = 0.0;
};

struct BootstrapResult {
  // Retained samples in sample-index order.
  std::vector<BootstrapSample> samples;
  int n_samples = 0;
  int failures = 0;
  std::vector<std::string> failure_reasons;
  // Fraction of retained samples with a negative witness.
  double confidence_negative = 0.0;
  std::uint64_t seed = 0;
  WitnessSector sector = WitnessSector::kSpinCorrected;
};

// Runs the inference pipeline on n_samples resamples with sub-seeds derived
// from (seed, sample index). Resamples raising AnalysisError are excluded;
// more than 10% of them raises kUnstableStatistics.
BootstrapResult bootstrap_pipeline(const CountsDataset& dataset, const WitnessParams& params,
                                   const BootstrapOptions& options);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Linear interpolation between order statistics at position q (n - 1).
double percentile(const std::vector<double>& sorted, double q);
// 16th and 84th percentiles.
Interval percentile_interval(std::vector<double> values);

struct BootstrapSummary {
  double confidence_negative = 0.0;
  int n_samples = 0;
  int failures = 0;
  // witness, spin p0..F, photonic p0'..F', in that order.
  std::vector<std::pair<std::string, Interval>> intervals;
};

BootstrapSummary confidence_and_intervals(const BootstrapResult& result);

// One witness value per line.
std::string distribution_dump(const BootstrapResult& result);

}  // namespace wdepth

#endif  // WDEPTH_BOOTSTRAP_H_
