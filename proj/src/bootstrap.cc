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

#include "wdepth/bootstrap.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>

#include "wdepth/errors.h"
#include "wdepth/inference.h"
#include "wdepth/kv_file.h"
#include "wdepth/simulator.h"

namespace wdepth {

namespace {

constexpr double kMaxFailureRate = 0.10;

struct Outcome {
  std::optional<BootstrapSample> sample;
  std::string failure;
};

Outcome run_one(const CountsDataset& dataset, const WitnessParams& params,
                const BootstrapOptions& options, int index) {
  Outcome out;
  try {
    const InferenceReport report =
        full_pipeline(resample(dataset, sub_seed(options.seed, static_cast<std::uint64_t>(index))),
                      options.expected_modes);
    BootstrapSample s{report.raw, report.corrected, params, 0.0};
    const Populations& pops = select_populations(s.raw, s.corrected, options.sector);
    if (options.reoptimize) {
      const OptimizedWitness opt = optimize_params(pops, params.k, params.n, options.search);
      s.params = opt.params;
      s.witness = opt.value;
    } else {
      s.witness = witness_value(params, pops);
    }
    out.sample = s;
  } catch (const AnalysisError& e) {
    out.failure = e.what();
  }
  return out;
}

}  // namespace

CountsDataset resample(const CountsDataset& dataset, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CountsDataset out;
  out.mode = DatasetMode::kSampled;
  out.records.reserve(dataset.records.size());
  for (const CountsRecord& r : dataset.records) {
    CountsRecord copy = r;
    // Labels iterate in sorted order, so the draw sequence is fixed.
    for (auto& [label, count] : copy.counts) {
      count = count > 0.0
                  ? static_cast<double>(std::poisson_distribution<std::int64_t>(count)(rng))
                  : 0.0;
    }
    out.records.push_back(std::move(copy));
  }
  return out;
}

const Populations& select_populations(const PopulationEstimate& raw,
                                      const PopulationEstimate& corrected, WitnessSector sector) {
  switch (sector) {
    case WitnessSector::kSpinCorrected:
      return corrected.spin;
    case WitnessSector::kSpinRaw:
      return raw.spin;
    case WitnessSector::kPhotonic:
      return raw.photonic;
  }
  return corrected.spin;
}

BootstrapResult bootstrap_pipeline(const CountsDataset& dataset, const WitnessParams& params,
                                   const BootstrapOptions& options) {
  if (options.n_samples < 100) throw std::invalid_argument("bootstrap needs at least 100 samples");
  params.validate();

  std::vector<Outcome> outcomes(options.n_samples);
  const int threads =
      std::max(1, std::min(options.threads > 0 ? options.threads
                                               : static_cast<int>(std::thread::hardware_concurrency()),
                           options.n_samples));
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < options.n_samples; i += threads) {
          outcomes[i] = run_one(dataset, params, options, i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  BootstrapResult result;
  result.n_samples = options.n_samples;
  result.seed = options.seed;
  result.sector = options.sector;
  int negative = 0;
  for (Outcome& o : outcomes) {
    if (!o.sample) {
      ++result.failures;
      if (result.failure_reasons.size() < 5) result.failure_reasons.push_back(o.failure);
      continue;
    }
    if (o.sample->witness < 0.0) ++negative;
    result.samples.push_back(std::move(*o.sample));
  }
  if (result.failures > kMaxFailureRate * options.n_samples) {
    throw AnalysisError(ErrorCode::kUnstableStatistics,
                        std::to_string(result.failures) + " of " +
                            std::to_string(options.n_samples) + " resamples failed" +
                            (result.failure_reasons.empty() ? ""
                                                            : "; first: " + result.failure_reasons[0]));
  }
  result.confidence_negative =
      static_cast<double>(negative) / static_cast<double>(result.samples.size());
  return result;
}

double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("percentile level outside [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t below = static_cast<std::size_t>(std::floor(pos));
  const std::size_t above = std::min(below + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(below);
  return sorted[below] + frac * (sorted[above] - sorted[below]);
}

Interval percentile_interval(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return Interval{percentile(values, 0.16), percentile(values, 0.84)};
}

BootstrapSummary confidence_and_intervals(const BootstrapResult& result) {
  if (result.samples.size() < 100) {
    throw std::invalid_argument("summary needs at least 100 retained samples");
  }
  BootstrapSummary s;
  s.confidence_negative = result.confidence_negative;
  s.n_samples = result.n_samples;
  s.failures = result.failures;
  const auto collect = [&](auto get) {
    std::vector<double> v;
    v.reserve(result.samples.size());
    for (const BootstrapSample& b : result.samples) v.push_back(get(b));
    return percentile_interval(std::move(v));
  };
  s.intervals.emplace_back("witness", collect([](const BootstrapSample& b) { return b.witness; }));
  const auto spin = [&](const BootstrapSample& b) -> const Populations& {
    return result.sector == WitnessSector::kSpinRaw ? b.raw.spin : b.corrected.spin;
  };
  s.intervals.emplace_back("p0", collect([&](const BootstrapSample& b) { return spin(b).p0; }));
  s.intervals.emplace_back("p1", collect([&](const BootstrapSample& b) { return spin(b).p1; }));
  s.intervals.emplace_back("p2", collect([&](const BootstrapSample& b) { return spin(b).p2; }));
  s.intervals.emplace_back("F", collect([&](const BootstrapSample& b) { return spin(b).fidelity; }));
  s.intervals.emplace_back("p0p", collect([](const BootstrapSample& b) { return b.raw.photonic.p0; }));
  s.intervals.emplace_back("p1p", collect([](const BootstrapSample& b) { return b.raw.photonic.p1; }));
  s.intervals.emplace_back("p2p", collect([](const BootstrapSample& b) { return b.raw.photonic.p2; }));
  s.intervals.emplace_back("Fp",
                           collect([](const BootstrapSample& b) { return b.raw.photonic.fidelity; }));
  return s;
}

std::string distribution_dump(const BootstrapResult& result) {
  std::string out;
  for (const BootstrapSample& s : result.samples) {
    out += format_number(s.witness);
    out += '\n';
  }
  return out;
}

}  // namespace wdepth
