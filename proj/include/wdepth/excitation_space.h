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

#ifndef WDEPTH_EXCITATION_SPACE_H_
#define WDEPTH_EXCITATION_SPACE_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wdepth {

using Complex = std::complex<double>;

// Relative weights t'_i and phases phi_i of a single-excitation mode
// a = sum_i sqrt(t'_i) e^{i phi_i} a_i. Weights sum to one.
struct ModeWeights {
  std::vector<double> weights;
  std::vector<double> phases;

  static ModeWeights uniform(int n_modes);
  // Normalizes non-negative raw weights; phases default to zero when empty.
  static ModeWeights from_unnormalized(std::span<const double> raw,
                                       std::span<const double> phases = {});

  int n_modes() const { return static_cast<int>(weights.size()); }
  // Throws std::invalid_argument unless the weights are non-negative, sum to
  // one within 1e-12 and the phase list has the same length.
  void validate() const;
  // sqrt(t'_i) e^{i phi_i}.
  std::vector<Complex> amplitudes() const;
};

// Pure state of N bosonic modes truncated at two total excitations.
//
// The double-excitation sector is stored densely as the upper triangle
// (i <= j) in row-major order; |i,i> is the normalized state with two
// excitations in mode i. Immutable after construction.
class TruncatedState {
 public:
  TruncatedState(int n_modes, Complex amp0, std::vector<Complex> amp1,
                 std::vector<Complex> amp2);

  int n_modes() const { return n_modes_; }
  Complex amp0() const { return amp0_; }
  std::span<const Complex> amp1() const { return amp1_; }
  std::span<const Complex> amp2_packed() const { return amp2_; }
  // Symmetric access, amp2(i, j) == amp2(j, i).
  Complex amp2(int i, int j) const;

  double squared_norm() const;

  static std::size_t pair_count(int n_modes);
  static std::size_t pair_index(int n_modes, int i, int j);

 private:
  int n_modes_;
  Complex amp0_;
  std::vector<Complex> amp1_;
  std::vector<Complex> amp2_;
};

struct SectorPopulations {
  double w0 = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
};

TruncatedState make_vacuum(int n_modes);

// (1/sqrt(N)) sum_i e^{i phi_i} |i>.
TruncatedState make_w_state(int n_modes, std::span<const double> phases);
TruncatedState make_w_state(int n_modes);

// sum_i sqrt(t'_i) e^{i phi_i} |i>.
TruncatedState make_weighted_w(const ModeWeights& weights);

// (a^dagger)^2 |0> / sqrt(2) for the mode a described by `weights`.
TruncatedState make_pair_excitation(const ModeWeights& weights);

// (cos t1 |g> + sin t1 |W_l>) (cos t2 |g'> + sin t2 |W_{N-l}>), the first
// factor on modes [0, l) and the second on [l, N).
TruncatedState make_biseparable(int n_modes, int l, double theta1, double theta2);

SectorPopulations sector_populations(const TruncatedState& state);

// <a|b>, conjugate-linear in the first argument.
Complex inner_product(const TruncatedState& a, const TruncatedState& b);

}  // namespace wdepth

#endif  // WDEPTH_EXCITATION_SPACE_H_
