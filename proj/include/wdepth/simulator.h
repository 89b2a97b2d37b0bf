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

#ifndef WDEPTH_SIMULATOR_H_
#define WDEPTH_SIMULATOR_H_

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "wdepth/dataset.h"
#include "wdepth/excitation_space.h"
#include "wdepth/population.h"

namespace wdepth {

struct TrialBudget {
  // Write pulses per CALIBRATE_i record.
  std::int64_t calibrate = 100'000'000;
  // Heralds per POPULATION_i record.
  std::int64_t population = 1'000'000;
  // Heralds for the FIDELITY record.
  std::int64_t fidelity = 1'000'000;
  // Write pulses for the THREE_PHOTON record.
  std::int64_t three_photon = 10'000'000'000;
};

struct ExperimentModel {
  int n_modes = 0;
  // Mean pair number per write pulse.
  double lambda = 0.0;
  // The collective mode a_e excited by the write pulse.
  ModeWeights excite;
  // Per-ensemble retrieval-to-click efficiency.
  std::vector<double> eta;
  double signal_efficiency = 0.16;
  double signal_dark = 0.0;
  double idler_dark = 0.0;
  double memory_loss = 0.0;
  TrialBudget trials;

  // Uniform weights, zero phases, eta_i = 0.04, lambda = 0.0311, no noise.
  static ExperimentModel defaults(int n_modes);
  // Throws std::invalid_argument on any violated model invariant,
  // including lambda >= 0.5.
  void validate() const;
};

struct CalibrateProbabilities {
  double p_s = 0.0;
  double p_i = 0.0;
  double p_si = 0.0;
};

// Click probability per herald (POPULATION_i and FIDELITY).
struct ClickProbability {
  double q = 0.0;
};

// Per write pulse; "12" and "13" include the triple events.
struct ThreePhotonProbabilities {
  double q1 = 0.0;
  double q12 = 0.0;
  double q13 = 0.0;
  double q123 = 0.0;
};

using EventProbabilities =
    std::variant<CalibrateProbabilities, ClickProbability, ThreePhotonProbabilities>;

struct GroundTruth {
  // Spin-wave and photonic populations of the truncated heralded state, with
  // alpha3 = 2 p2 / p1^2 and lambda_poisson = 2 p2 / p1.
  PopulationEstimate estimate;
  // Heralded mass above two excitations removed by the truncation.
  double tail_mass = 0.0;
  double herald_probability = 0.0;
  // Fraction of heralds caused by a signal dark click alone.
  double dark_fraction = 0.0;
  // |<W_N|a_e^dag|0>|^2.
  double w_overlap = 0.0;
};

GroundTruth ground_truth(const ExperimentModel& model);

// Throws std::invalid_argument for an index outside [0, n_modes).
EventProbabilities event_probabilities(const ExperimentModel& model, const AodConfig& config);

// Three-photon probabilities for a combined idler mode with per-ensemble
// detection amplitudes (sqrt of the transfer efficiency, zero for ensembles
// outside the detection basis).
ThreePhotonProbabilities three_photon_probabilities(const ExperimentModel& model,
                                                    std::span<const double> detection);

// Joint-event sampling; identical inputs give identical counts.
CountsRecord sample_counts(const AodConfig& config, const EventProbabilities& probs,
                           std::int64_t trials, std::uint64_t seed);
// Expected counts p * trials.
CountsRecord expected_counts(const AodConfig& config, const EventProbabilities& probs,
                             std::int64_t trials);

struct PlanEntry {
  AodConfig config;
  std::int64_t trials = 0;
};

// Every configuration the inference pipeline needs, sized from the budget:
// CALIBRATE_0..N-1, POPULATION_0..N-1, FIDELITY, THREE_PHOTON.
std::vector<PlanEntry> full_plan(const ExperimentModel& model);

// Sub-seed of record `index` in a campaign seeded with `seed`.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index);

// With strict set, a plan missing a required configuration raises
// AnalysisError(kInvalidPlan).
CountsDataset run_campaign(const ExperimentModel& model, const std::vector<PlanEntry>& plan,
                           std::uint64_t seed, bool strict = true);
CountsDataset analytic_campaign(const ExperimentModel& model,
                                const std::vector<PlanEntry>& plan);

}  // namespace wdepth

#endif  // WDEPTH_SIMULATOR_H_
