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

#ifndef WDEPTH_WITNESS_H_
#define WDEPTH_WITNESS_H_

#include <functional>
#include <vector>

#include "wdepth/population.h"

namespace wdepth {

// Coefficients of W_k = alpha P0 + beta P1 + gamma P2 - |W_N><W_N| for a
// claimed entanglement depth k among n parties.
struct WitnessParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  int k = 0;
  int n = 0;

  // Throws std::invalid_argument on negative or non-finite coefficients, or
  // when k lies outside [max(2, ceil(2n/3)), n] or admits no bipartition.
  void validate() const;
};

// Smallest depth the witness family is set up for, ceil(2n/3).
int min_depth(int n);

// Bipartition sizes l (first block) that a state of depth below k can take:
// both blocks hold at most k-1 parties, max(1, n-k+1) <= l <= min(n-1, k-1).
struct LRange {
  int lo = 0;
  int hi = -1;
  bool empty() const { return hi < lo; }
};
LRange admissible_l(int k, int n);

// A bi-separable test state (cos t1|g> + sin t1|W_l>)(cos t2|g'> + sin t2|W_{n-l}>).
struct BisepPoint {
  int l = 1;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

enum class MinMethod { kInteriorStationary, kBoundary, kGridFallback };

const char* to_string(MinMethod method);

struct MinResult {
  double f_min = 0.0;
  BisepPoint argmin;
  MinMethod method = MinMethod::kGridFallback;
};

// Witness expectation on a bi-separable test state, in the double-angle form.
// Throws std::invalid_argument when point.l is not admissible for params.
double f_value(const WitnessParams& params, const BisepPoint& point);

// (df/dtheta1, df/dtheta2).
struct Gradient {
  double d1 = 0.0;
  double d2 = 0.0;
};
Gradient f_gradient(const WitnessParams& params, const BisepPoint& point);

struct StationaryResult {
  double theta1 = 0.0;
  double theta2 = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Alternating arctangent updates of theta1 and theta2, each of which is the
// exact minimizer of f along that coordinate. Converged when a full sweep
// moves both angles by less than tol and the gradient is below 10*tol. A
// denominator within 1e-14 of zero aborts with converged == false.
StationaryResult stationary_iterate(const WitnessParams& params, int l, double start1,
                                    double start2, int max_iter = 500, double tol = 1e-10);

// Global minimum of f over admissible l and the square [0, pi/2]^2: converged
// stationary points from a 5x5 start lattice, 1-D scans of the four edges,
// and a 400x400 grid. Ties resolve to the lowest l, then lexicographic angles.
MinResult min_f(const WitnessParams& params);

// min_f(params).f_min >= -slack.
bool is_feasible(const WitnessParams& params, double slack);

// alpha p0 + beta p1 + gamma p2 - F. Negative values certify depth >= k when
// params is feasible.
double witness_value(const WitnessParams& params, const Populations& pops);

// Least gamma making (alpha, beta, gamma) feasible for depth k, from the
// positivity of the 2x2 quadratic form f takes in the second block for fixed
// first-block amplitudes. Returns +infinity when no gamma works.
double minimal_gamma(double alpha, double beta, int k, int n);

// Least gamma in [gamma_lo, gamma_hi] with min_f >= -slack, by bisection on
// the numerical minimizer. Returns +infinity when gamma_hi is infeasible.
double bisect_minimal_gamma(double alpha, double beta, int k, int n, double gamma_lo,
                            double gamma_hi, double tol = 1e-6, double slack = 1e-9);

struct SearchOptions {
  double beta_step = 0.005;
  int alpha_log_points = 40;
  double alpha_log_min = 1e-5;
  double alpha_linear_step = 0.01;
  double gamma_max = 100.0;
  int refine_factor = 10;
  // Slack used to certify the chosen triple with min_f; a triple that fails
  // has its gamma raised by bisection.
  double final_slack = 1e-9;
};

struct OptimizedWitness {
  WitnessParams params;
  double value = 0.0;
  bool certifiable = false;
};

// Feasible (alpha, beta, gamma) minimizing the witness value for the given
// populations: outer grid over (alpha, beta) with the least feasible gamma per
// cell, then one refinement around the best cell. Deterministic.
OptimizedWitness optimize_params(const Populations& pops, int k, int n,
                                 const SearchOptions& options = {});

using ConfidenceFn = std::function<double(const WitnessParams&)>;

struct DepthScanEntry {
  int k = 0;
  WitnessParams params;
  double value = 0.0;
};

struct DepthCertificate {
  bool certified = false;
  int k = 0;
  WitnessParams params;
  double witness_value = 0.0;
  double confidence = 0.0;
  // Every k that was tried, from n downward.
  std::vector<DepthScanEntry> scan;
};

// Largest k in [ceil(2n/3), n] with a negative optimized witness value;
// `confidence` (may be empty) is evaluated for that k only.
DepthCertificate certify_depth(const Populations& pops, int n, const ConfidenceFn& confidence,
                               const SearchOptions& options = {});

}  // namespace wdepth

#endif  // WDEPTH_WITNESS_H_
