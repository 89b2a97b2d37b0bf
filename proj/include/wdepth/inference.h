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

#ifndef WDEPTH_INFERENCE_H_
#define WDEPTH_INFERENCE_H_

#include <span>
#include <string>
#include <vector>

#include "wdepth/dataset.h"
#include "wdepth/population.h"

namespace wdepth {

// Floor applied to non-positive retrieval efficiencies.
inline constexpr double kEtaFloor = 1e-6;

// P_SI / P_S - P_I. Non-positive results are clamped to kEtaFloor and a
// warning is appended when `warnings` is given. P_S = 0 raises kNoHerald.
double retrieval_efficiency(double p_s, double p_i, double p_si,
                            std::vector<std::string>* warnings = nullptr);

// q1 q123 / (q12 q13); a zero denominator raises kInsufficientCoincidences.
double three_photon_alpha(double q1, double q12, double q13, double q123);

// p1' = sum q_i, p2' = alpha p1'^2 / 2, p0' = 1 - p1' - p2'. The fidelity
// field is left zero. p1' > 1 raises kInvalidData.
Populations photonic_populations(std::span<const double> q, double alpha3);

struct CalibrationTable {
  std::vector<double> eta;
  // (sum eta_i) / N.
  double T = 0.0;
  // |<W'_N|W_N>|^2 with t'_i = eta_i / (N T).
  double overlap_sq = 0.0;

  // Throws std::invalid_argument on an empty list or eta outside (0, 1].
  static CalibrationTable from_eta(std::vector<double> eta);
};

// Solves p1 + 2 p2 = S with p2 = alpha p1^2 / 2 for the non-negative root.
// S > 1 + alpha or p0 < -1e-6 raises kInvalidData. The fidelity field is
// left zero.
Populations spinwave_populations(std::span<const double> q, const CalibrationTable& cal,
                                 double alpha3);

// p1 q_f |<W'|W>|^2 / (T (p1 + 2 p2)). T = 0 raises kInvalidCalibration.
double fidelity_lower_bound(double q_f, const CalibrationTable& cal, double p1, double p2);

// Renormalizes spin-wave p0, p1, p2 and F by 1 / (1 + p3 / (1 - lambda))
// with lambda = 2 p2 / p1 and p3 = p1 lambda^2 / 6. lambda >= 1 raises
// kModelViolation.
PopulationEstimate higher_order_correction(const PopulationEstimate& est);

struct InferenceReport {
  int n_modes = 0;
  CalibrationTable calibration;
  std::vector<double> q;
  double q_f = 0.0;
  double q1 = 0.0, q12 = 0.0, q13 = 0.0, q123 = 0.0;
  // sum q_i / eta_i.
  double s = 0.0;
  // Fidelity bound before capping at p1.
  double fidelity_bound_uncapped = 0.0;
  PopulationEstimate raw;
  PopulationEstimate corrected;
  std::vector<std::string> warnings;
};

// Chains calibration, alpha, photonic and spin-wave populations, the fidelity
// bound and the higher-order correction. Counts become frequencies count /
// trials. Noise-driven boundary violations are clamped with a warning instead
// of raising: eta <= 0 is floored, a negative vacuum population is set to
// zero with p2 = alpha p1^2 / 2 kept, and F is capped at p1. eta > 1 raises
// kInvalidCalibration. A missing record raises kIncompleteDataset naming every absent
// configuration. With expected_modes > 0 the dataset must cover that many
// ensembles.
InferenceReport full_pipeline(const CountsDataset& dataset, int expected_modes = 0);

// Key-value audit record of every intermediate quantity.
std::string format_report(const InferenceReport& report);

}  // namespace wdepth

#endif  // WDEPTH_INFERENCE_H_
