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

#include "wdepth/witness.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace wdepth {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kDenominatorFloor = 1e-14;
constexpr int kStartLattice = 5;
constexpr int kGridPoints = 400;
constexpr double kEdgeResolution = 1e-4;
constexpr int kPolishIterations = 20000;
// Absorbs rounding in the closed-form gamma bound (m + m' = 1 in exact
// arithmetic).
constexpr double kClosedFormEps = 1e-13;

// Per-bipartition constants of the double-angle objective.
struct Objective {
  double alpha, beta, gamma;
  double m;      // l / N
  double cross;  // 2 sqrt(l (N - l)) / N

  Objective(const WitnessParams& p, int l)
      : alpha(p.alpha),
        beta(p.beta),
        gamma(p.gamma),
        m(static_cast<double>(l) / p.n),
        cross(2.0 * std::sqrt(static_cast<double>(l) * (p.n - l)) / p.n) {}

  double operator()(double c1, double s1, double c2, double s2) const {
    return 0.25 * (alpha * (1 + c1) * (1 + c2) + 2 * beta * (1 - c1 * c2) +
                   gamma * (1 - c1) * (1 - c2) - (1 + c1) * (1 - c2) + 2 * m * (c1 - c2) -
                   cross * s1 * s2);
  }

  // Denominators of the arctangent updates.
  double denom1(double c2) const {
    return -alpha * (1 + c2) + 2 * beta * c2 + gamma * (1 - c2) + (1 - c2) - 2 * m;
  }
  double denom2(double c1) const {
    return -alpha * (1 + c1) + 2 * beta * c1 + gamma * (1 - c1) - (1 + c1) + 2 * m;
  }
};

void require_l(const WitnessParams& params, int l) {
  const LRange range = admissible_l(params.k, params.n);
  if (l < range.lo || l > range.hi) {
    throw std::invalid_argument("l=" + std::to_string(l) + " outside admissible range [" +
                                std::to_string(range.lo) + ", " + std::to_string(range.hi) +
                                "] for k=" + std::to_string(params.k) +
                                ", n=" + std::to_string(params.n));
  }
}

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  BisepPoint point;
  MinMethod method = MinMethod::kGridFallback;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  return std::tie(a.point.l, a.point.theta1, a.point.theta2) <
         std::tie(b.point.l, b.point.theta1, b.point.theta2);
}

void offer(Candidate& best, double value, int l, double t1, double t2, MinMethod method) {
  const Candidate c{value, BisepPoint{l, t1, t2}, method};
  if (better(c, best)) best = c;
}

}  // namespace

int min_depth(int n) { return (2 * n + 2) / 3; }

LRange admissible_l(int k, int n) { return LRange{std::max(1, n - k + 1), std::min(n - 1, k - 1)}; }

void WitnessParams::validate() const {
  for (double c : {alpha, beta, gamma}) {
    if (!std::isfinite(c) || c < 0.0) {
      throw std::invalid_argument("witness coefficients must be finite and non-negative");
    }
  }
  if (n < 2) throw std::invalid_argument("witness needs n >= 2, got " + std::to_string(n));
  if (k < std::max(2, min_depth(n)) || k > n) {
    throw std::invalid_argument("depth k=" + std::to_string(k) + " outside [" +
                                std::to_string(std::max(2, min_depth(n))) + ", " +
                                std::to_string(n) + "]");
  }
  if (admissible_l(k, n).empty()) {
    throw std::invalid_argument("no bipartition with both blocks below k=" + std::to_string(k) +
                                " for n=" + std::to_string(n));
  }
}

const char* to_string(MinMethod method) {
  switch (method) {
    case MinMethod::kInteriorStationary:
      return "interior-stationary";
    case MinMethod::kBoundary:
      return "boundary";
    case MinMethod::kGridFallback:
      return "grid-fallback";
  }
  return "unknown";
}

double f_value(const WitnessParams& params, const BisepPoint& point) {
  require_l(params, point.l);
  const Objective f(params, point.l);
  return f(std::cos(2 * point.theta1), std::sin(2 * point.theta1), std::cos(2 * point.theta2),
           std::sin(2 * point.theta2));
}

Gradient f_gradient(const WitnessParams& params, const BisepPoint& point) {
  require_l(params, point.l);
  const Objective f(params, point.l);
  const double c1 = std::cos(2 * point.theta1), s1 = std::sin(2 * point.theta1);
  const double c2 = std::cos(2 * point.theta2), s2 = std::sin(2 * point.theta2);
  return Gradient{0.5 * (s1 * f.denom1(c2) - f.cross * c1 * s2),
                  0.5 * (s2 * f.denom2(c1) - f.cross * s1 * c2)};
}

StationaryResult stationary_iterate(const WitnessParams& params, int l, double start1,
                                    double start2, int max_iter, double tol) {
  require_l(params, l);
  const Objective f(params, l);
  StationaryResult out{start1, start2, false, 0};
  double t1 = start1, t2 = start2;
  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    const double d1 = f.denom1(std::cos(2 * t2));
    if (std::abs(d1) < kDenominatorFloor) break;
    // The numerator is non-negative, so atan2 keeps 2*theta in [0, pi] and
    // picks the minimizing branch.
    const double n1 = 0.5 * std::atan2(f.cross * std::sin(2 * t2), d1);

    const double d2 = f.denom2(std::cos(2 * n1));
    if (std::abs(d2) < kDenominatorFloor) break;
    const double n2 = 0.5 * std::atan2(f.cross * std::sin(2 * n1), d2);

    const double step = std::max(std::abs(n1 - t1), std::abs(n2 - t2));
    t1 = n1;
    t2 = n2;
    out.theta1 = t1;
    out.theta2 = t2;
    if (step < tol) {
      const Gradient g = f_gradient(params, BisepPoint{l, t1, t2});
      out.converged = std::abs(g.d1) < 10 * tol && std::abs(g.d2) < 10 * tol;
      break;
    }
  }
  return out;
}

MinResult min_f(const WitnessParams& params) {
  params.validate();
  const LRange range = admissible_l(params.k, params.n);

  std::vector<double> grid(kGridPoints), grid_c(kGridPoints), grid_s(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) {
    grid[i] = kHalfPi * i / (kGridPoints - 1);
    grid_c[i] = std::cos(2 * grid[i]);
    grid_s[i] = std::sin(2 * grid[i]);
  }
  const int edge_points = static_cast<int>(std::ceil(kHalfPi / kEdgeResolution)) + 1;

  Candidate best;
  for (int l = range.lo; l <= range.hi; ++l) {
    const Objective f(params, l);

    for (int i = 0; i < kStartLattice; ++i) {
      for (int j = 0; j < kStartLattice; ++j) {
        const double s1 = kHalfPi * (i + 1) / (kStartLattice + 1);
        const double s2 = kHalfPi * (j + 1) / (kStartLattice + 1);
        const StationaryResult r = stationary_iterate(params, l, s1, s2);
        if (!r.converged) continue;
        const bool interior =
            r.theta1 > 0 && r.theta1 < kHalfPi && r.theta2 > 0 && r.theta2 < kHalfPi;
        offer(best, f_value(params, BisepPoint{l, r.theta1, r.theta2}), l, r.theta1, r.theta2,
              interior ? MinMethod::kInteriorStationary : MinMethod::kBoundary);
      }
    }

    for (double fixed : {0.0, kHalfPi}) {
      const double cf = std::cos(2 * fixed), sf = std::sin(2 * fixed);
      for (int i = 0; i < edge_points; ++i) {
        const double t = std::min(kHalfPi, i * kEdgeResolution);
        const double c = std::cos(2 * t), s = std::sin(2 * t);
        offer(best, f(cf, sf, c, s), l, fixed, t, MinMethod::kBoundary);
        offer(best, f(c, s, cf, sf), l, t, fixed, MinMethod::kBoundary);
      }
    }

    double grid_best = std::numeric_limits<double>::infinity();
    int bi = 0, bj = 0;
    for (int i = 0; i < kGridPoints; ++i) {
      for (int j = 0; j < kGridPoints; ++j) {
        const double v = f(grid_c[i], grid_s[i], grid_c[j], grid_s[j]);
        if (v < grid_best) {
          grid_best = v;
          bi = i;
          bj = j;
        }
        if (v < best.value) offer(best, v, l, grid[i], grid[j], MinMethod::kGridFallback);
      }
    }
    // Coordinate-exact updates never raise f, so polishing the best grid cell
    // is safe even when the iteration stalls in a flat valley.
    const StationaryResult r = stationary_iterate(params, l, grid[bi], grid[bj], kPolishIterations);
    const bool interior = r.theta1 > 0 && r.theta1 < kHalfPi && r.theta2 > 0 && r.theta2 < kHalfPi;
    offer(best, f_value(params, BisepPoint{l, r.theta1, r.theta2}), l, r.theta1, r.theta2,
          interior ? MinMethod::kInteriorStationary : MinMethod::kBoundary);
  }

  // Re-evaluate through the public entry point so f_min == f_value(argmin).
  return MinResult{f_value(params, best.point), best.point, best.method};
}

bool is_feasible(const WitnessParams& params, double slack) {
  if (!(slack >= 0.0)) throw std::invalid_argument("slack must be non-negative");
  return min_f(params).f_min >= -slack;
}

double witness_value(const WitnessParams& params, const Populations& pops) {
  for (double p : {pops.p0, pops.p1, pops.p2, pops.fidelity}) {
    if (!(p >= -1e-9 && p <= 1.0 + 1e-9)) {
      throw std::invalid_argument("populations must lie in [0, 1]");
    }
  }
  return params.alpha * pops.p0 + params.beta * pops.p1 + params.gamma * pops.p2 - pops.fidelity;
}

double minimal_gamma(double alpha, double beta, int k, int n) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const LRange range = admissible_l(k, n);
  double gamma = 0.0;
  for (int l = range.lo; l <= range.hi; ++l) {
    // For first-block amplitudes with u = tan^2(theta1), positivity of the 2x2
    // form in (b0, b1) reads gamma >= m m' / (alpha + (beta - m) u) - (beta - m') / u.
    // Its supremum over u > 0 is (sqrt(m m') - sqrt((beta - m)(beta - m')))^2 / alpha.
    const double m = static_cast<double>(l) / n;
    const double mp = static_cast<double>(n - l) / n;
    if (beta < m - kClosedFormEps || beta < mp - kClosedFormEps) return kInf;
    const double b = std::max(0.0, beta - m);
    const double c = std::max(0.0, beta - mp);
    const double gap = std::sqrt(m * mp) - std::sqrt(b * c);
    if (gap <= kClosedFormEps) continue;
    if (alpha <= 0.0) return kInf;
    gamma = std::max(gamma, gap * gap / alpha);
  }
  return gamma;
}

double bisect_minimal_gamma(double alpha, double beta, int k, int n, double gamma_lo,
                            double gamma_hi, double tol, double slack) {
  WitnessParams p{alpha, beta, gamma_hi, k, n};
  if (!is_feasible(p, slack)) return std::numeric_limits<double>::infinity();
  p.gamma = gamma_lo;
  if (is_feasible(p, slack)) return gamma_lo;
  double lo = gamma_lo, hi = gamma_hi;
  while (hi - lo > tol) {
    p.gamma = 0.5 * (lo + hi);
    if (is_feasible(p, slack)) {
      hi = p.gamma;
    } else {
      lo = p.gamma;
    }
  }
  return hi;
}

namespace {

std::vector<double> alpha_grid(const SearchOptions& o) {
  std::vector<double> out{0.0};
  const double log_lo = std::log10(o.alpha_log_min);
  for (int i = 0; i < o.alpha_log_points; ++i) {
    out.push_back(std::pow(10.0, log_lo + (0.0 - log_lo) * i / (o.alpha_log_points - 1)));
  }
  const int linear = static_cast<int>(std::lround(1.0 / o.alpha_linear_step));
  for (int i = 0; i <= linear; ++i) out.push_back(i * o.alpha_linear_step);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-15; }),
            out.end());
  return out;
}

std::vector<double> beta_grid(const SearchOptions& o) {
  const int count = static_cast<int>(std::lround(1.0 / o.beta_step));
  std::vector<double> out;
  for (int i = 0; i <= count; ++i) out.push_back(i * o.beta_step);
  return out;
}

// Points from lo to hi through mid with `factor` subdivisions on each side.
std::vector<double> refine_axis(double lo, double mid, double hi, int factor) {
  std::vector<double> out;
  for (int j = 0; j < factor; ++j) out.push_back(lo + (mid - lo) * j / factor);
  for (int j = 0; j <= factor; ++j) out.push_back(mid + (hi - mid) * j / factor);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Cell {
  double alpha = 0, beta = 0, gamma = 0;
  double value = std::numeric_limits<double>::infinity();
  std::size_t ia = 0, ib = 0;
};

}  // namespace

OptimizedWitness optimize_params(const Populations& pops, int k, int n,
                                 const SearchOptions& options) {
  WitnessParams{1.0, 1.0, 1.0, k, n}.validate();
  const auto objective = [&](double a, double b, double g) {
    return a * pops.p0 + b * pops.p1 + g * pops.p2 - pops.fidelity;
  };

  const std::vector<double> alphas = alpha_grid(options);
  const std::vector<double> betas = beta_grid(options);
  Cell best;
  for (std::size_t ib = 0; ib < betas.size(); ++ib) {
    for (std::size_t ia = 0; ia < alphas.size(); ++ia) {
      const double g = minimal_gamma(alphas[ia], betas[ib], k, n);
      if (!(g <= options.gamma_max)) continue;
      const double v = objective(alphas[ia], betas[ib], g);
      if (v < best.value) best = Cell{alphas[ia], betas[ib], g, v, ia, ib};
    }
  }
  if (!std::isfinite(best.value)) {
    throw std::logic_error("witness search grid contains no feasible cell");
  }

  const std::vector<double> fine_alpha =
      refine_axis(alphas[best.ia == 0 ? 0 : best.ia - 1], alphas[best.ia],
                  alphas[std::min(best.ia + 1, alphas.size() - 1)], options.refine_factor);
  const std::vector<double> fine_beta =
      refine_axis(betas[best.ib == 0 ? 0 : best.ib - 1], betas[best.ib],
                  betas[std::min(best.ib + 1, betas.size() - 1)], options.refine_factor);
  for (double b : fine_beta) {
    for (double a : fine_alpha) {
      const double g = minimal_gamma(a, b, k, n);
      if (!(g <= options.gamma_max)) continue;
      const double v = objective(a, b, g);
      if (v < best.value) {
        best.alpha = a;
        best.beta = b;
        best.gamma = g;
        best.value = v;
      }
    }
  }

  WitnessParams params{best.alpha, best.beta, best.gamma, k, n};
  if (!is_feasible(params, options.final_slack)) {
    params.gamma = bisect_minimal_gamma(params.alpha, params.beta, k, n, params.gamma,
                                        options.gamma_max, 1e-9, options.final_slack);
    if (!std::isfinite(params.gamma)) {
      throw std::logic_error("optimized witness could not be made feasible");
    }
  }
  const double value = witness_value(params, pops);
  return OptimizedWitness{params, value, value < 0.0};
}

DepthCertificate certify_depth(const Populations& pops, int n, const ConfidenceFn& confidence,
                               const SearchOptions& options) {
  DepthCertificate cert;
  const int k_lo = std::max(2, min_depth(n));
  for (int k = n; k >= k_lo; --k) {
    if (admissible_l(k, n).empty()) break;
    const OptimizedWitness opt = optimize_params(pops, k, n, options);
    cert.scan.push_back(DepthScanEntry{k, opt.params, opt.value});
    if (opt.certifiable) {
      cert.certified = true;
      cert.k = k;
      cert.params = opt.params;
      cert.witness_value = opt.value;
      cert.confidence = confidence ? confidence(opt.params) : 0.0;
      return cert;
    }
  }
  if (!cert.scan.empty()) {
    const DepthScanEntry& last = cert.scan.back();
    cert.k = last.k;
    cert.params = last.params;
    cert.witness_value = last.value;
  }
  return cert;
}

}  // namespace wdepth
