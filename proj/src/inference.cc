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

#include "wdepth/inference.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "wdepth/errors.h"
#include "wdepth/kv_file.h"

namespace wdepth {

namespace {

constexpr double kNegativeTolerance = 1e-6;

// Non-negative root of alpha p1^2 + p1 - s = 0, written to avoid
// cancellation for small alpha * s.
double solve_p1(double s, double alpha3) {
  if (alpha3 == 0.0) return s;
  return 2.0 * s / (1.0 + std::sqrt(1.0 + 4.0 * alpha3 * s));
}

double sum_over_eta(std::span<const double> q, const CalibrationTable& cal) {
  if (q.size() != cal.eta.size()) {
    throw std::invalid_argument("population list and calibration differ in length");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] >= 0.0)) throw std::invalid_argument("click probabilities must be non-negative");
    s += q[i] / cal.eta[i];
  }
  return s;
}

void check_spin_bound(double s, double alpha3) {
  if (s > 1.0 + alpha3) {
    throw AnalysisError(ErrorCode::kInvalidData,
                        "sum q_i/eta_i = " + format_number(s) + " exceeds 1 + alpha = " +
                            format_number(1.0 + alpha3));
  }
}

}  // namespace

double retrieval_efficiency(double p_s, double p_i, double p_si,
                            std::vector<std::string>* warnings) {
  if (!(p_s > 0.0)) throw AnalysisError(ErrorCode::kNoHerald, "signal click probability is zero");
  const double eta = p_si / p_s - p_i;
  if (eta <= 0.0) {
    if (warnings) {
      warnings->push_back("degenerate calibration: eta = " + format_number(eta) +
                          " clamped to " + format_number(kEtaFloor));
    }
    return kEtaFloor;
  }
  return eta;
}

double three_photon_alpha(double q1, double q12, double q13, double q123) {
  if (!(q12 > 0.0) || !(q13 > 0.0)) {
    throw AnalysisError(ErrorCode::kInsufficientCoincidences,
                        "no two-photon coincidences in the three-photon record");
  }
  return q1 * q123 / (q12 * q13);
}

Populations photonic_populations(std::span<const double> q, double alpha3) {
  if (q.empty()) throw std::invalid_argument("population list is empty");
  double p1 = 0.0;
  for (double v : q) {
    if (!(v >= 0.0)) throw std::invalid_argument("click probabilities must be non-negative");
    p1 += v;
  }
  if (p1 > 1.0) {
    throw AnalysisError(ErrorCode::kInvalidData,
                        "photonic single population " + format_number(p1) + " exceeds one");
  }
  const double p2 = alpha3 * p1 * p1 / 2.0;
  return Populations{1.0 - p1 - p2, p1, p2, 0.0};
}

CalibrationTable CalibrationTable::from_eta(std::vector<double> eta) {
  if (eta.empty()) throw std::invalid_argument("calibration needs at least one efficiency");
  for (double e : eta) {
    if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("efficiencies must lie in (0, 1]");
  }
  CalibrationTable cal;
  const double n = static_cast<double>(eta.size());
  cal.T = std::accumulate(eta.begin(), eta.end(), 0.0) / n;
  double amp = 0.0;
  for (double e : eta) amp += std::sqrt(e / (n * cal.T) / n);
  cal.overlap_sq = amp * amp;
  cal.eta = std::move(eta);
  return cal;
}

Populations spinwave_populations(std::span<const double> q, const CalibrationTable& cal,
                                 double alpha3) {
  if (!(alpha3 >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
  const double s = sum_over_eta(q, cal);
  check_spin_bound(s, alpha3);
  const double p1 = solve_p1(s, alpha3);
  const double p2 = alpha3 * p1 * p1 / 2.0;
  const double p0 = 1.0 - p1 - p2;
  if (p0 < -kNegativeTolerance) {
    throw AnalysisError(ErrorCode::kInvalidData, "negative vacuum population " + format_number(p0));
  }
  return Populations{p0, p1, p2, 0.0};
}

double fidelity_lower_bound(double q_f, const CalibrationTable& cal, double p1, double p2) {
  if (!(cal.T > 0.0)) throw AnalysisError(ErrorCode::kInvalidCalibration, "total transfer is zero");
  if (!(p1 > 0.0)) throw std::invalid_argument("fidelity bound needs p1 > 0");
  if (!(q_f >= 0.0)) throw std::invalid_argument("fidelity click probability must be >= 0");
  return p1 * q_f * cal.overlap_sq / (cal.T * (p1 + 2.0 * p2));
}

PopulationEstimate higher_order_correction(const PopulationEstimate& est) {
  if (est.corrected) throw std::invalid_argument("estimate is already corrected");
  const Populations& s = est.spin;
  if (!(s.p1 > 0.0)) throw std::invalid_argument("correction needs p1 > 0");
  const double lambda = 2.0 * s.p2 / s.p1;
  if (lambda >= 1.0) {
    throw AnalysisError(ErrorCode::kModelViolation,
                        "Poisson parameter " + format_number(lambda) + " is not below one");
  }
  const double p3 = s.p1 * lambda * lambda / 6.0;
  const double factor = 1.0 / (1.0 + p3 / (1.0 - lambda));
  PopulationEstimate out = est;
  out.spin = Populations{s.p0 * factor, s.p1 * factor, s.p2 * factor, s.fidelity * factor};
  out.lambda_poisson = lambda;
  out.corrected = true;
  return out;
}

InferenceReport full_pipeline(const CountsDataset& dataset, int expected_modes) {
  InferenceReport r;
  const int n = std::max(dataset.n_modes(), expected_modes);
  r.n_modes = n;

  std::string missing;
  const auto need = [&](const AodConfig& c) {
    const CountsRecord* rec = dataset.find(c);
    if (!rec) missing += (missing.empty() ? "" : ", ") + c.label();
    return rec;
  };
  std::vector<const CountsRecord*> cal_records, pop_records;
  for (int i = 0; i < n; ++i) cal_records.push_back(need({ConfigKind::kCalibrate, i}));
  for (int i = 0; i < n; ++i) pop_records.push_back(need({ConfigKind::kPopulation, i}));
  const CountsRecord* fid = need({ConfigKind::kFidelity, -1});
  const CountsRecord* three = need({ConfigKind::kThreePhoton, -1});
  if (!missing.empty()) {
    throw AnalysisError(ErrorCode::kIncompleteDataset, "missing configurations: " + missing);
  }
  if (n < 2) throw AnalysisError(ErrorCode::kIncompleteDataset, "dataset covers fewer than 2 ensembles");

  std::vector<double> eta;
  for (const CountsRecord* c : cal_records) {
    eta.push_back(retrieval_efficiency(c->frequency("S"), c->frequency("I"),
                                       c->frequency("SI"), &r.warnings));
  }
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (eta[i] > 1.0) {
      throw AnalysisError(ErrorCode::kInvalidCalibration,
                          "retrieval efficiency " + format_number(eta[i]) + " of ensemble " +
                              std::to_string(i) + " exceeds one");
    }
  }
  r.calibration = CalibrationTable::from_eta(std::move(eta));

  r.q1 = three->frequency("1");
  r.q12 = three->frequency("12");
  r.q13 = three->frequency("13");
  r.q123 = three->frequency("123");
  double alpha3 = 0.0;
  if (r.q12 > 0.0 && r.q13 > 0.0) {
    alpha3 = three_photon_alpha(r.q1, r.q12, r.q13, r.q123);
  } else {
    r.warnings.push_back("no two-photon coincidences; alpha set to zero");
  }

  for (const CountsRecord* c : pop_records) r.q.push_back(c->frequency("click"));
  r.q_f = fid->frequency("click");

  PopulationEstimate& raw = r.raw;
  raw.alpha3 = alpha3;
  raw.photonic = photonic_populations(r.q, alpha3);
  raw.photonic.fidelity = r.q_f;
  if (raw.photonic.p0 < 0.0) {
    r.warnings.push_back("photonic vacuum population " + format_number(raw.photonic.p0) +
                         " clamped to zero");
    const double scale = 1.0 / (raw.photonic.p1 + raw.photonic.p2);
    raw.photonic = Populations{0.0, raw.photonic.p1 * scale, raw.photonic.p2 * scale, r.q_f};
  }
  if (raw.photonic.fidelity > raw.photonic.p1) {
    r.warnings.push_back("photonic fidelity capped at p1'");
    raw.photonic.fidelity = raw.photonic.p1;
  }

  r.s = sum_over_eta(r.q, r.calibration);
  double p1 = solve_p1(r.s, alpha3);
  double p2 = alpha3 * p1 * p1 / 2.0;
  double p0 = 1.0 - p1 - p2;
  if (p0 < 0.0) {
    // Keeps p2 = alpha p1^2 / 2 on the p0 = 0 boundary.
    r.warnings.push_back("sum q_i/eta_i = " + format_number(r.s) +
                         " implies vacuum population " + format_number(p0) +
                         "; clamped to zero");
    p1 = solve_p1(1.0, alpha3 / 2.0);
    p2 = 1.0 - p1;
    p0 = 0.0;
  }
  raw.spin = Populations{p0, p1, p2, 0.0};
  if (p1 > 0.0) {
    r.fidelity_bound_uncapped = fidelity_lower_bound(r.q_f, r.calibration, p1, p2);
    raw.spin.fidelity = r.fidelity_bound_uncapped;
    if (raw.spin.fidelity > p1) {
      r.warnings.push_back("fidelity bound " + format_number(raw.spin.fidelity) +
                           " capped at p1");
      raw.spin.fidelity = p1;
    }
    raw.lambda_poisson = 2.0 * p2 / p1;
    r.corrected = higher_order_correction(raw);
  } else {
    r.warnings.push_back("no single excitations; correction skipped");
    r.corrected = raw;
    r.corrected.corrected = true;
  }
  return r;
}

std::string format_report(const InferenceReport& r) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("schema_version", "v1");
  kv.emplace_back("n_modes", std::to_string(r.n_modes));
  kv.emplace_back("eta", format_list(r.calibration.eta));
  kv.emplace_back("T", format_number(r.calibration.T));
  kv.emplace_back("overlap_sq", format_number(r.calibration.overlap_sq));
  kv.emplace_back("q", format_list(r.q));
  kv.emplace_back("q_f", format_number(r.q_f));
  kv.emplace_back("q1", format_number(r.q1));
  kv.emplace_back("q12", format_number(r.q12));
  kv.emplace_back("q13", format_number(r.q13));
  kv.emplace_back("q123", format_number(r.q123));
  kv.emplace_back("alpha3", format_number(r.raw.alpha3));
  kv.emplace_back("S", format_number(r.s));
  kv.emplace_back("lambda", format_number(r.corrected.lambda_poisson));
  kv.emplace_back("fidelity_bound_uncapped", format_number(r.fidelity_bound_uncapped));
  const auto add = [&](const std::string& prefix, const Populations& p) {
    kv.emplace_back(prefix + "p0", format_number(p.p0));
    kv.emplace_back(prefix + "p1", format_number(p.p1));
    kv.emplace_back(prefix + "p2", format_number(p.p2));
    kv.emplace_back(prefix + "F", format_number(p.fidelity));
  };
  add("photonic.", r.raw.photonic);
  add("spin.raw.", r.raw.spin);
  add("spin.corrected.", r.corrected.spin);
  kv.emplace_back("warnings", std::to_string(r.warnings.size()));
  for (std::size_t i = 0; i < r.warnings.size(); ++i) {
    kv.emplace_back("warning." + std::to_string(i), r.warnings[i]);
  }
  std::ostringstream out;
  write_key_values(out, kv);
  return out.str();
}

}  // namespace wdepth
