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
#include <numeric>
#include <stdexcept>
#include <string>

namespace wdepth {

namespace {

constexpr double kWeightTolerance = 1e-12;

void require_modes(int n_modes) {
  if (n_modes < 1) {
    throw std::invalid_argument("n_modes must be positive, got " + std::to_string(n_modes));
  }
}

}  // namespace

ModeWeights ModeWeights::uniform(int n_modes) {
  require_modes(n_modes);
  return ModeWeights{std::vector<double>(n_modes, 1.0 / n_modes), std::vector<double>(n_modes, 0.0)};
}

ModeWeights ModeWeights::from_unnormalized(std::span<const double> raw,
                                           std::span<const double> phases) {
  if (raw.empty()) {
    throw std::invalid_argument("mode weights must not be empty");
  }
  double total = 0.0;
  for (double w : raw) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("mode weights must be finite and non-negative");
    }
    total += w;
  }
  if (total <= 0.0) {
    throw std::invalid_argument("mode weights must not all vanish");
  }
  ModeWeights out;
  out.weights.reserve(raw.size());
  for (double w : raw) out.weights.push_back(w / total);
  if (phases.empty()) {
    out.phases.assign(raw.size(), 0.0);
  } else {
    out.phases.assign(phases.begin(), phases.end());
  }
  out.validate();
  return out;
}

void ModeWeights::validate() const {
  if (weights.empty()) {
    throw std::invalid_argument("mode weights must not be empty");
  }
  if (phases.size() != weights.size()) {
    throw std::invalid_argument("phase list length " + std::to_string(phases.size()) +
                                " does not match weight count " + std::to_string(weights.size()));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("mode weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw std::invalid_argument("mode weights must sum to 1, got " + std::to_string(total));
  }
}

std::vector<Complex> ModeWeights::amplitudes() const {
  std::vector<Complex> out(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out[i] = std::polar(std::sqrt(weights[i]), phases[i]);
  }
  return out;
}

TruncatedState::TruncatedState(int n_modes, Complex amp0, std::vector<Complex> amp1,
                               std::vector<Complex> amp2)
    : n_modes_(n_modes), amp0_(amp0), amp1_(std::move(amp1)), amp2_(std::move(amp2)) {
  require_modes(n_modes);
  if (amp1_.size() != static_cast<std::size_t>(n_modes)) {
    throw std::invalid_argument("single-excitation amplitude count must equal n_modes");
  }
  if (amp2_.size() != pair_count(n_modes)) {
    throw std::invalid_argument("double-excitation amplitude count must equal N(N+1)/2");
  }
}

std::size_t TruncatedState::pair_count(int n_modes) {
  const auto n = static_cast<std::size_t>(n_modes);
  return n * (n + 1) / 2;
}

std::size_t TruncatedState::pair_index(int n_modes, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n_modes) {
    throw std::invalid_argument("mode index out of range");
  }
  const auto n = static_cast<std::size_t>(n_modes);
  const auto a = static_cast<std::size_t>(i);
  // Rows 0..a-1 hold n, n-1, ..., n-a+1 entries.
  return a * n - a * (a - 1) / 2 + static_cast<std::size_t>(j - i);
}

Complex TruncatedState::amp2(int i, int j) const { return amp2_[pair_index(n_modes_, i, j)]; }

double TruncatedState::squared_norm() const {
  const SectorPopulations w = sector_populations(*this);
  return w.w0 + w.w1 + w.w2;
}

TruncatedState make_vacuum(int n_modes) {
  require_modes(n_modes);
  return TruncatedState(n_modes, 1.0, std::vector<Complex>(n_modes),
                        std::vector<Complex>(TruncatedState::pair_count(n_modes)));
}

TruncatedState make_w_state(int n_modes, std::span<const double> phases) {
  require_modes(n_modes);
  if (phases.size() != static_cast<std::size_t>(n_modes)) {
    throw std::invalid_argument("phase list length must equal n_modes");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_modes));
  std::vector<Complex> amp1(n_modes);
  for (int i = 0; i < n_modes; ++i) amp1[i] = std::polar(scale, phases[i]);
  return TruncatedState(n_modes, 0.0, std::move(amp1),
                        std::vector<Complex>(TruncatedState::pair_count(n_modes)));
}

TruncatedState make_w_state(int n_modes) {
  require_modes(n_modes);
  return make_w_state(n_modes, std::vector<double>(n_modes, 0.0));
}

TruncatedState make_weighted_w(const ModeWeights& weights) {
  weights.validate();
  const int n = weights.n_modes();
  return TruncatedState(n, 0.0, weights.amplitudes(),
                        std::vector<Complex>(TruncatedState::pair_count(n)));
}

TruncatedState make_pair_excitation(const ModeWeights& weights) {
  weights.validate();
  const int n = weights.n_modes();
  const std::vector<Complex> e = weights.amplitudes();
  std::vector<Complex> amp2(TruncatedState::pair_count(n));
  const double root2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      amp2[TruncatedState::pair_index(n, i, j)] = (i == j) ? e[i] * e[i] : root2 * e[i] * e[j];
    }
  }
  return TruncatedState(n, 0.0, std::vector<Complex>(n), std::move(amp2));
}

TruncatedState make_biseparable(int n_modes, int l, double theta1, double theta2) {
  require_modes(n_modes);
  if (l < 1 || l > n_modes - 1) {
    throw std::invalid_argument("bipartition size l=" + std::to_string(l) + " outside [1, " +
                                std::to_string(n_modes - 1) + "]");
  }
  const double a0 = std::cos(theta1), a1 = std::sin(theta1);
  const double b0 = std::cos(theta2), b1 = std::sin(theta2);
  const int rest = n_modes - l;

  std::vector<Complex> amp1(n_modes);
  const double left = a1 * b0 / std::sqrt(static_cast<double>(l));
  const double right = a0 * b1 / std::sqrt(static_cast<double>(rest));
  for (int i = 0; i < l; ++i) amp1[i] = left;
  for (int i = l; i < n_modes; ++i) amp1[i] = right;

  std::vector<Complex> amp2(TruncatedState::pair_count(n_modes));
  const double cross = a1 * b1 / std::sqrt(static_cast<double>(l) * rest);
  for (int i = 0; i < l; ++i) {
    for (int j = l; j < n_modes; ++j) amp2[TruncatedState::pair_index(n_modes, i, j)] = cross;
  }
  return TruncatedState(n_modes, a0 * b0, std::move(amp1), std::move(amp2));
}

SectorPopulations sector_populations(const TruncatedState& state) {
  SectorPopulations out;
  out.w0 = std::norm(state.amp0());
  for (const Complex& a : state.amp1()) out.w1 += std::norm(a);
  for (const Complex& a : state.amp2_packed()) out.w2 += std::norm(a);
  return out;
}

Complex inner_product(const TruncatedState& a, const TruncatedState& b) {
  if (a.n_modes() != b.n_modes()) {
    throw std::invalid_argument("inner_product: mode counts differ (" +
                                std::to_string(a.n_modes()) + " vs " +
                                std::to_string(b.n_modes()) + ")");
  }
  Complex sum = std::conj(a.amp0()) * b.amp0();
  const auto a1 = a.amp1(), b1 = b.amp1();
  for (std::size_t i = 0; i < a1.size(); ++i) sum += std::conj(a1[i]) * b1[i];
  const auto a2 = a.amp2_packed(), b2 = b.amp2_packed();
  for (std::size_t i = 0; i < a2.size(); ++i) sum += std::conj(a2[i]) * b2[i];
  return sum;
}

}  // namespace wdepth
