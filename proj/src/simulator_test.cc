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

#include "wdepth/simulator.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "wdepth/errors.h"

namespace wdepth {
namespace {

constexpr double kPi = std::numbers::pi;

ExperimentModel ideal(int n) {
  ExperimentModel m = ExperimentModel::defaults(n);
  m.lambda = 1e-6;
  return m;
}

ExperimentModel disordered(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.5, 1.5), ph(-0.6, 0.6), eta(0.01, 0.2);
  ExperimentModel m = ExperimentModel::defaults(n);
  std::vector<double> raw(n), phases(n);
  for (int i = 0; i < n; ++i) {
    raw[i] = w(rng);
    phases[i] = ph(rng);
    m.eta[i] = eta(rng);
  }
  m.excite = ModeWeights::from_unnormalized(raw, phases);
  m.lambda = 0.1 * std::uniform_real_distribution<double>(0, 1)(rng);
  m.signal_dark = 1e-4;
  m.idler_dark = 1e-5;
  m.memory_loss = 0.05;
  return m;
}

template <typename T>
T probs(const ExperimentModel& m, ConfigKind kind, int index = -1) {
  return std::get<T>(event_probabilities(m, AodConfig{kind, index}));
}

TEST(simulator, validate_rejects_strong_pumping) {
  ExperimentModel m = ExperimentModel::defaults(9);
  m.lambda = 0.5;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m.lambda = 0.03;
  m.eta.pop_back();
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(simulator, ideal_model_is_w_state) {
  const GroundTruth t = ground_truth(ideal(9));
  EXPECT_NEAR(t.estimate.spin.fidelity, 1.0, 1e-6);
  EXPECT_NEAR(t.estimate.spin.p1, 1.0, 1e-6);
  EXPECT_NEAR(t.estimate.spin.p0, 0.0, 1e-12);
  EXPECT_NEAR(t.estimate.spin.p2, 0.0, 1e-6);
}

TEST(simulator, double_to_single_ratio_is_half_lambda) {
  ExperimentModel m = ExperimentModel::defaults(9);
  m.lambda = 0.0311;
  m.signal_dark = 1e-3;
  m.memory_loss = 0.1;
  const GroundTruth t = ground_truth(m);
  EXPECT_NEAR(t.estimate.spin.p2 / t.estimate.spin.p1, 0.01555, 1e-12);
  EXPECT_NEAR(t.estimate.lambda_poisson, 0.0311, 1e-12);
}

TEST(simulator, single_phase_error_fidelity) {
  ExperimentModel m = ideal(9);
  std::vector<double> phases(9, 0.0);
  const double delta = 0.7;
  phases[4] = delta;
  m.excite = ModeWeights::from_unnormalized(std::vector<double>(9, 1.0), phases);
  const GroundTruth t = ground_truth(m);
  const double expected = std::norm((8.0 + std::polar(1.0, delta)) / 9.0) * t.estimate.spin.p1;
  EXPECT_NEAR(t.estimate.spin.fidelity, expected, 1e-14);
}

TEST(simulator, vacuum_from_darks_and_loss) {
  ExperimentModel m = ExperimentModel::defaults(4);
  m.signal_dark = 0.001;
  m.memory_loss = 0.2;
  const GroundTruth t = ground_truth(m);
  const double genuine = 1 - std::exp(-m.signal_efficiency * m.lambda);
  const double herald = 1 - (1 - genuine) * (1 - m.signal_dark);
  const double dark = (1 - genuine) * m.signal_dark / herald;
  EXPECT_NEAR(t.herald_probability, herald, 1e-15);
  EXPECT_NEAR(t.dark_fraction, dark, 1e-15);
  EXPECT_NEAR(t.estimate.spin.p0, dark + (1 - dark) * 0.2, 1e-14);
  EXPECT_NEAR(t.estimate.spin.p0 + t.estimate.spin.p1 + t.estimate.spin.p2, 1.0, 1e-15);
}

TEST(simulator, tail_mass_matches_poisson_sum) {
  ExperimentModel m = ExperimentModel::defaults(3);
  m.lambda = 0.3;
  const GroundTruth t = ground_truth(m);
  double tail = 0.0, term = std::exp(-m.lambda);
  for (int k = 1; k < 40; ++k) {
    term *= m.lambda / k;
    if (k > 2) tail += term;
  }
  EXPECT_NEAR(t.tail_mass, tail / (1 - std::exp(-m.lambda)), 1e-14);
}

TEST(simulator, calibration_recovers_eta) {
  ExperimentModel m = ExperimentModel::defaults(9);
  const auto c = probs<CalibrateProbabilities>(m, ConfigKind::kCalibrate, 3);
  EXPECT_NEAR(c.p_si / c.p_s - c.p_i, 0.04, 1e-9);
}

TEST(simulator, calibration_structural_identity) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ExperimentModel m = disordered(2 + seed % 10, seed);
    for (int i = 0; i < m.n_modes; ++i) {
      const auto c = probs<CalibrateProbabilities>(m, ConfigKind::kCalibrate, i);
      EXPECT_NEAR(c.p_si - c.p_s * c.p_i, m.eta[i] * c.p_s, 1e-15);
      EXPECT_LE(c.p_si, std::min(c.p_s, c.p_i));
    }
  }
}

TEST(simulator, population_uniform_limit) {
  ExperimentModel m = ideal(9);
  m.lambda = 1e-10;
  for (int i = 0; i < 9; ++i) {
    EXPECT_NEAR(probs<ClickProbability>(m, ConfigKind::kPopulation, i).q, 0.04 / 9, 1e-9);
  }
}

TEST(simulator, population_sum_is_p1_plus_two_p2) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ExperimentModel m = disordered(2 + seed % 15, seed);
    const GroundTruth t = ground_truth(m);
    double s = 0.0;
    for (int i = 0; i < m.n_modes; ++i) {
      s += probs<ClickProbability>(m, ConfigKind::kPopulation, i).q / m.eta[i];
    }
    EXPECT_NEAR(s, t.estimate.spin.p1 + 2 * t.estimate.spin.p2, 1e-14);
  }
}

TEST(simulator, fidelity_uniform_eta_without_doubles) {
  ExperimentModel m = disordered(7, 3);
  m.lambda = 0.0;
  m.signal_dark = 0.01;
  m.eta.assign(7, 0.05);
  const GroundTruth t = ground_truth(m);
  EXPECT_NEAR(probs<ClickProbability>(m, ConfigKind::kFidelity).q,
              0.05 * t.estimate.spin.fidelity, 1e-15);
}

TEST(simulator, ground_truth_fidelity_is_overlap_law) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const ExperimentModel m = disordered(2 + seed % 12, seed);
    const GroundTruth t = ground_truth(m);
    const double overlap =
        std::norm(inner_product(make_w_state(m.n_modes), make_weighted_w(m.excite)));
    EXPECT_NEAR(t.estimate.spin.fidelity, overlap * t.estimate.spin.p1, 1e-14);
  }
}

TEST(simulator, three_photon_alpha_is_two_p2_over_p1_squared) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const ExperimentModel m = disordered(2 + seed % 12, seed);
    const auto t = probs<ThreePhotonProbabilities>(m, ConfigKind::kThreePhoton);
    const Populations& s = ground_truth(m).estimate.spin;
    if (s.p1 == 0) continue;
    EXPECT_NEAR(t.q1 * t.q123 / (t.q12 * t.q13), 2 * s.p2 / (s.p1 * s.p1), 1e-9);
  }
}

TEST(simulator, three_photon_alpha_is_basis_independent) {
  const ExperimentModel m = disordered(9, 77);
  const auto alpha_for = [&](const std::vector<double>& d) {
    const ThreePhotonProbabilities t = three_photon_probabilities(m, d);
    return t.q1 * t.q123 / (t.q12 * t.q13);
  };
  std::vector<double> full(9), subset(9, 0.0), skewed(9);
  for (int i = 0; i < 9; ++i) {
    full[i] = std::sqrt(m.eta[i] / 9);
    skewed[i] = 0.05 * (1 + i);
  }
  subset[0] = subset[4] = subset[8] = 0.1;
  const double reference = alpha_for(full);
  EXPECT_NEAR(alpha_for(subset), reference, 1e-9);
  EXPECT_NEAR(alpha_for(skewed), reference, 1e-9);
}

TEST(simulator, three_photon_rejects_bad_detection) {
  const ExperimentModel m = ideal(3);
  EXPECT_THROW(three_photon_probabilities(m, std::vector<double>{0.1, 0.1}),
               std::invalid_argument);
  EXPECT_THROW(three_photon_probabilities(m, std::vector<double>{1, 1, 1}),
               std::invalid_argument);
}

TEST(simulator, sample_counts_trivial_probabilities) {
  const AodConfig fid{ConfigKind::kFidelity, -1};
  EXPECT_EQ(sample_counts(fid, ClickProbability{0.0}, 12345, 1).count("click"), 0);
  EXPECT_EQ(sample_counts(fid, ClickProbability{1.0}, 100, 1).count("click"), 100);
}

TEST(simulator, sample_counts_binomial_band) {
  const AodConfig fid{ConfigKind::kFidelity, -1};
  const double band = 5 * std::sqrt(0.04 * 1e6 * 0.96);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double c = sample_counts(fid, ClickProbability{0.04}, 1'000'000, seed).count("click");
    EXPECT_NEAR(c, 40000, band);
  }
}

TEST(simulator, sample_counts_joint_consistency) {
  const ExperimentModel m = disordered(5, 9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const AodConfig cal{ConfigKind::kCalibrate, 2};
    const CountsRecord c = sample_counts(cal, event_probabilities(m, cal), 1'000'000, seed);
    EXPECT_LE(c.count("SI"), c.count("S"));
    EXPECT_LE(c.count("SI"), c.count("I"));
    const AodConfig three{ConfigKind::kThreePhoton, -1};
    const CountsRecord t =
        sample_counts(three, event_probabilities(m, three), 1'000'000'000, seed);
    EXPECT_LE(t.count("123"), t.count("12"));
    EXPECT_LE(t.count("123"), t.count("13"));
    EXPECT_LE(t.count("12"), t.count("1"));
  }
}

TEST(simulator, sample_counts_deterministic) {
  const ExperimentModel m = disordered(4, 1);
  const AodConfig cal{ConfigKind::kCalibrate, 0};
  const CountsRecord a = sample_counts(cal, event_probabilities(m, cal), 5'000'000, 42);
  const CountsRecord b = sample_counts(cal, event_probabilities(m, cal), 5'000'000, 42);
  EXPECT_EQ(a.counts, b.counts);
}

TEST(simulator, campaign_record_count_and_determinism) {
  const ExperimentModel m = ExperimentModel::defaults(9);
  const CountsDataset a = run_campaign(m, full_plan(m), 7);
  EXPECT_EQ(a.records.size(), 20u);
  EXPECT_EQ(dataset_to_string(a), dataset_to_string(run_campaign(m, full_plan(m), 7)));
  EXPECT_NE(dataset_to_string(a), dataset_to_string(run_campaign(m, full_plan(m), 8)));
  EXPECT_NO_THROW(a.validate());
}

TEST(simulator, campaign_sub_seeds_differ) {
  const ExperimentModel m = ExperimentModel::defaults(3);
  const CountsDataset a = run_campaign(m, full_plan(m), 7);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].seed, sub_seed(7, i));
    for (std::size_t j = 0; j < i; ++j) EXPECT_NE(a.records[i].seed, a.records[j].seed);
  }
}

TEST(simulator, strict_campaign_requires_full_plan) {
  const ExperimentModel m = ExperimentModel::defaults(3);
  std::vector<PlanEntry> plan = full_plan(m);
  plan.pop_back();
  try {
    run_campaign(m, plan, 1);
    FAIL() << "expected invalid-plan";
  } catch (const AnalysisError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidPlan);
    EXPECT_NE(std::string(e.what()).find("THREE_PHOTON"), std::string::npos);
  }
  EXPECT_EQ(run_campaign(m, plan, 1, false).records.size(), plan.size());
}

TEST(simulator, analytic_campaign_counts_are_expectations) {
  const ExperimentModel m = disordered(4, 5);
  const CountsDataset d = analytic_campaign(m, full_plan(m));
  EXPECT_EQ(d.mode, DatasetMode::kAnalytic);
  const CountsRecord* fid = d.find({ConfigKind::kFidelity, -1});
  ASSERT_NE(fid, nullptr);
  EXPECT_DOUBLE_EQ(fid->frequency("click"), probs<ClickProbability>(m, ConfigKind::kFidelity).q);
}

}  // namespace
}  // namespace wdepth
