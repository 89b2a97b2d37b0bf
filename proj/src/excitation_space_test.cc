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

#include "wdepth/excitation_space.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"

namespace wdepth {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(excitation_space, w_state_two_modes) {
  const TruncatedState w = make_w_state(2);
  EXPECT_NEAR(w.amp1()[0].real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(w.amp1()[1].real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(w.amp0(), Complex(0.0));
  EXPECT_NEAR(w.squared_norm(), 1.0, 1e-12);
}

TEST(excitation_space, w_state_nine_modes_equal_share) {
  const TruncatedState w = make_w_state(9);
  for (const Complex& a : w.amp1()) EXPECT_NEAR(std::norm(a), 1.0 / 9, 1e-15);
}

TEST(excitation_space, w_state_phase_flip_overlap) {
  const std::vector<double> phases{0, kPi, 0};
  const TruncatedState flipped = make_w_state(3, phases);
  EXPECT_NEAR(flipped.amp1()[1].real(), -1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(std::norm(inner_product(make_w_state(3), flipped)), 1.0 / 9, 1e-15);
}

TEST(excitation_space, w_state_rejects_phase_length_mismatch) {
  const std::vector<double> phases{0, 0};
  EXPECT_THROW(make_w_state(3, phases), std::invalid_argument);
}

TEST(excitation_space, weighted_w) {
  ModeWeights uniform = ModeWeights::uniform(5);
  const Complex overlap = inner_product(make_weighted_w(uniform), make_w_state(5));
  EXPECT_NEAR(std::abs(overlap), 1.0, 1e-15);

  const ModeWeights w{{0.64, 0.36}, {0, 0}};
  const TruncatedState s = make_weighted_w(w);
  EXPECT_NEAR(s.amp1()[0].real(), 0.8, 1e-15);
  EXPECT_NEAR(s.amp1()[1].real(), 0.6, 1e-15);
  EXPECT_NEAR(inner_product(s, make_w_state(2)).real(), 1.4 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(inner_product(s, make_w_state(2)).real(), 0.98995, 1e-5);

  const std::vector<double> eta(9, 0.04);
  EXPECT_NEAR(std::norm(inner_product(make_weighted_w(ModeWeights::from_unnormalized(eta)),
                                      make_w_state(9))),
              1.0, 1e-15);
}

TEST(excitation_space, weighted_w_rejects_bad_sum) {
  const ModeWeights w{{0.5, 0.6}, {0, 0}};
  EXPECT_THROW(make_weighted_w(w), std::invalid_argument);
}

TEST(excitation_space, biseparable_corners) {
  const TruncatedState vac = make_biseparable(9, 4, 0, 0);
  EXPECT_NEAR(vac.amp0().real(), 1.0, 1e-15);

  const SectorPopulations pair = sector_populations(make_biseparable(9, 4, kPi / 2, kPi / 2));
  EXPECT_NEAR(pair.w2, 1.0, 1e-15);

  const TruncatedState single = make_biseparable(9, 4, 0, kPi / 2);
  EXPECT_NEAR(std::norm(inner_product(make_w_state(9), single)), 5.0 / 9, 1e-15);
}

TEST(excitation_space, biseparable_sectors_quarter) {
  const SectorPopulations p = sector_populations(make_biseparable(9, 4, kPi / 4, kPi / 4));
  EXPECT_NEAR(p.w0, 0.25, 1e-15);
  EXPECT_NEAR(p.w1, 0.5, 1e-15);
  EXPECT_NEAR(p.w2, 0.25, 1e-15);
}

TEST(excitation_space, biseparable_rejects_l) {
  EXPECT_THROW(make_biseparable(9, 0, 0.1, 0.1), std::invalid_argument);
  EXPECT_THROW(make_biseparable(9, 9, 0.1, 0.1), std::invalid_argument);
}

TEST(excitation_space, vacuum_and_w_sectors) {
  const SectorPopulations v = sector_populations(make_vacuum(4));
  EXPECT_EQ(v.w0, 1.0);
  EXPECT_EQ(v.w1 + v.w2, 0.0);
  const SectorPopulations w = sector_populations(make_w_state(4));
  EXPECT_NEAR(w.w1, 1.0, 1e-15);
  EXPECT_EQ(std::abs(inner_product(make_vacuum(9), make_w_state(9))), 0.0);
  EXPECT_NEAR(inner_product(make_w_state(9), make_w_state(9)).real(), 1.0, 1e-15);
}

TEST(excitation_space, inner_product_mode_mismatch) {
  EXPECT_THROW(inner_product(make_w_state(3), make_w_state(4)), std::invalid_argument);
}

TEST(excitation_space, pair_index_is_dense_and_ordered) {
  for (int n : {1, 2, 5, 9}) {
    std::size_t expected = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        EXPECT_EQ(TruncatedState::pair_index(n, i, j), expected);
        EXPECT_EQ(TruncatedState::pair_index(n, j, i), expected);
        ++expected;
      }
    }
    EXPECT_EQ(TruncatedState::pair_count(n), expected);
  }
}

TEST(excitation_space, pair_excitation_is_square_of_mode) {
  // (sum_i a_i c_i^dag)^2 |0> / sqrt(2): |i,i> carries a_i^2 and |i,j> carries sqrt(2) a_i a_j.
  const ModeWeights w = ModeWeights::from_unnormalized(std::vector<double>{1, 2, 3},
                                                       std::vector<double>{0.1, -0.4, 0.7});
  const TruncatedState s = make_pair_excitation(w);
  const std::vector<Complex> a = w.amplitudes();
  EXPECT_NEAR(std::abs(s.amp2(1, 1) - a[1] * a[1]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amp2(0, 2) - std::sqrt(2.0) * a[0] * a[2]), 0.0, 1e-15);
  EXPECT_NEAR(s.squared_norm(), 1.0, 1e-12);
}

TEST(excitation_space, property_norm_preservation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0, kPi / 2);
  std::uniform_real_distribution<double> raw(0.01, 1.0);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 20;
    const int l = 1 + trial % (n - 1);
    EXPECT_NEAR(make_biseparable(n, l, angle(rng), angle(rng)).squared_norm(), 1.0, 1e-12);
    std::vector<double> r(n), ph(n);
    for (int i = 0; i < n; ++i) {
      r[i] = raw(rng);
      ph[i] = phase(rng);
    }
    const ModeWeights w = ModeWeights::from_unnormalized(r, ph);
    EXPECT_NEAR(make_weighted_w(w).squared_norm(), 1.0, 1e-12);
    EXPECT_NEAR(make_pair_excitation(w).squared_norm(), 1.0, 1e-12);
    EXPECT_NEAR(make_w_state(n, ph).squared_norm(), 1.0, 1e-12);
  }
}

TEST(excitation_space, property_global_phase_covariance) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 12;
    std::vector<double> r(n), ph(n), shifted(n);
    const double global = phase(rng);
    for (int i = 0; i < n; ++i) {
      r[i] = 0.1 + (i * 37 % 11) / 11.0;
      ph[i] = phase(rng);
      shifted[i] = ph[i] + global;
    }
    const TruncatedState a = make_weighted_w(ModeWeights::from_unnormalized(r, ph));
    const TruncatedState b = make_weighted_w(ModeWeights::from_unnormalized(r, shifted));
    const SectorPopulations pa = sector_populations(a), pb = sector_populations(b);
    EXPECT_NEAR(pa.w1, pb.w1, 1e-14);
    const TruncatedState w = make_w_state(n);
    EXPECT_NEAR(std::abs(inner_product(w, a)), std::abs(inner_product(w, b)), 1e-14);
  }
}

}  // namespace
}  // namespace wdepth
