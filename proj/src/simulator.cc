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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "wdepth/errors.h"

namespace wdepth {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t binomial(std::mt19937_64& rng, std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  return std::binomial_distribution<std::int64_t>(n, p)(rng);
}

// Draws cell counts of a multinomial by sequential conditional binomials.
std::vector<std::int64_t> multinomial(std::mt19937_64& rng, std::int64_t n,
                                      const std::vector<double>& cells) {
  std::vector<std::int64_t> out(cells.size(), 0);
  double remaining_p = 1.0;
  std::int64_t remaining_n = n;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (remaining_n == 0) break;
    const double p = remaining_p > 0 ? std::clamp(cells[c] / remaining_p, 0.0, 1.0) : 0.0;
    out[c] = binomial(rng, remaining_n, p);
    remaining_n -= out[c];
    remaining_p -= cells[c];
  }
  return out;
}

struct HeraldedState {
  double herald = 0.0;
  double dark_fraction = 0.0;
  double p0 = 1.0, p1 = 0.0, p2 = 0.0;
  double tail = 0.0;
};

HeraldedState heralded_state(const ExperimentModel& m) {
  HeraldedState h;
  const double no_genuine = std::exp(-m.signal_efficiency * m.lambda);
  h.herald = 1.0 - no_genuine * (1.0 - m.signal_dark);
  if (h.herald <= 0.0) return h;
  h.dark_fraction = no_genuine * m.signal_dark / h.herald;
  // Zero-truncated Poisson excitation law, truncated again above two.
  const double half = m.lambda / 2.0;
  const double r1 = 1.0 / (1.0 + half);
  const double r2 = half / (1.0 + half);
  const double genuine = (1.0 - h.dark_fraction) * (1.0 - m.memory_loss);
  h.p1 = genuine * r1;
  h.p2 = genuine * r2;
  h.p0 = 1.0 - h.p1 - h.p2;
  if (m.lambda > 0) {
    const double nonzero = -std::expm1(-m.lambda);
    const double kept = std::exp(-m.lambda) * (m.lambda + m.lambda * half) / nonzero;
    h.tail = genuine * std::max(0.0, 1.0 - kept);
  }
  return h;
}

double overlap_sq(std::span<const double> detection, const std::vector<Complex>& excite) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < excite.size(); ++i) s += detection[i] * excite[i];
  return std::norm(s);
}

std::vector<double> collective_detection(const ExperimentModel& m) {
  std::vector<double> d(m.n_modes);
  for (int i = 0; i < m.n_modes; ++i) d[i] = std::sqrt(m.eta[i] / m.n_modes);
  return d;
}

}  // namespace

ExperimentModel ExperimentModel::defaults(int n_modes) {
  ExperimentModel m;
  m.n_modes = n_modes;
  m.lambda = 0.0311;
  m.excite = ModeWeights::uniform(n_modes);
  m.eta.assign(n_modes, 0.04);
  return m;
}

void ExperimentModel::validate() const {
  if (n_modes < 2) throw std::invalid_argument("model needs at least two ensembles");
  if (!(lambda >= 0.0 && lambda < 0.5)) {
    throw std::invalid_argument("lambda must lie in [0, 0.5), got " + std::to_string(lambda));
  }
  if (excite.n_modes() != n_modes) throw std::invalid_argument("excite weights length mismatch");
  excite.validate();
  if (static_cast<int>(eta.size()) != n_modes) throw std::invalid_argument("eta length mismatch");
  for (double e : eta) {
    if (!is_probability(e)) throw std::invalid_argument("eta entries must lie in [0, 1]");
  }
  if (!is_probability(signal_efficiency) || !is_probability(signal_dark) ||
      !is_probability(idler_dark) || !is_probability(memory_loss)) {
    throw std::invalid_argument("efficiencies, dark probabilities and loss must lie in [0, 1]");
  }
  if (trials.calibrate < 1 || trials.population < 1 || trials.fidelity < 1 ||
      trials.three_photon < 1) {
    throw std::invalid_argument("trial budgets must be positive");
  }
}

GroundTruth ground_truth(const ExperimentModel& model) {
  model.validate();
  const HeraldedState h = heralded_state(model);
  GroundTruth t;
  t.herald_probability = h.herald;
  t.dark_fraction = h.dark_fraction;
  t.tail_mass = h.tail;
  const std::vector<Complex> e = model.excite.amplitudes();
  t.w_overlap = overlap_sq(std::vector<double>(model.n_modes, 1.0 / std::sqrt(model.n_modes)), e);

  PopulationEstimate& est = t.estimate;
  est.spin = Populations{h.p0, h.p1, h.p2, h.p1 * t.w_overlap};
  est.alpha3 = h.p1 > 0 ? 2.0 * h.p2 / (h.p1 * h.p1) : 0.0;
  est.lambda_poisson = h.p1 > 0 ? 2.0 * h.p2 / h.p1 : 0.0;

  double p1p = 0.0;
  for (int i = 0; i < model.n_modes; ++i) {
    p1p += std::get<ClickProbability>(
               event_probabilities(model, AodConfig{ConfigKind::kPopulation, i}))
               .q;
  }
  const double p2p = est.alpha3 * p1p * p1p / 2.0;
  const double fp =
      std::get<ClickProbability>(event_probabilities(model, AodConfig{ConfigKind::kFidelity, -1}))
          .q;
  est.photonic = Populations{1.0 - p1p - p2p, p1p, p2p, fp};
  return t;
}

EventProbabilities event_probabilities(const ExperimentModel& model, const AodConfig& config) {
  model.validate();
  if (config.indexed() && (config.index < 0 || config.index >= model.n_modes)) {
    throw std::invalid_argument("configuration index out of range: " + config.label());
  }
  const HeraldedState h = heralded_state(model);
  switch (config.kind) {
    case ConfigKind::kCalibrate: {
      const int i = config.index;
      const double mean = model.lambda * model.excite.weights[i];
      CalibrateProbabilities c;
      // Signal darks stay out of this configuration: the random-coincidence
      // term of the calibration identity only carries idler background.
      c.p_s = -std::expm1(-model.signal_efficiency * mean);
      c.p_i = 1.0 - std::exp(-model.eta[i] * mean) * (1.0 - model.idler_dark);
      c.p_si = model.eta[i] * c.p_s + c.p_s * c.p_i;
      if (c.p_si > std::min(c.p_s, c.p_i) + 1e-15) {
        throw std::invalid_argument("calibration model for " + config.label() +
                                    " yields coincidences above a marginal; reduce dark counts");
      }
      return c;
    }
    case ConfigKind::kPopulation: {
      const int i = config.index;
      return ClickProbability{model.eta[i] * model.excite.weights[i] * (h.p1 + 2.0 * h.p2)};
    }
    case ConfigKind::kFidelity: {
      return ClickProbability{(h.p1 + 2.0 * h.p2) *
                              overlap_sq(collective_detection(model), model.excite.amplitudes())};
    }
    case ConfigKind::kThreePhoton:
      return three_photon_probabilities(model, collective_detection(model));
  }
  throw std::logic_error("unhandled configuration");
}

ThreePhotonProbabilities three_photon_probabilities(const ExperimentModel& model,
                                                    std::span<const double> detection) {
  model.validate();
  if (static_cast<int>(detection.size()) != model.n_modes) {
    throw std::invalid_argument("detection amplitude length mismatch");
  }
  double total = 0.0;
  for (double d : detection) {
    if (!(d >= 0.0)) throw std::invalid_argument("detection amplitudes must be non-negative");
    total += d * d;
  }
  if (total > 1.0 + 1e-12) throw std::invalid_argument("detection efficiencies exceed one");
  const HeraldedState h = heralded_state(model);
  const double tau = overlap_sq(detection, model.excite.amplitudes());
  ThreePhotonProbabilities t;
  t.q1 = h.herald;
  t.q12 = t.q1 * tau * h.p1 / 2.0;
  t.q13 = t.q12;
  t.q123 = t.q1 * tau * tau * h.p2 / 2.0;
  return t;
}

CountsRecord sample_counts(const AodConfig& config, const EventProbabilities& probs,
                           std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  std::mt19937_64 rng(seed);
  CountsRecord r{config, trials, {}, seed};
  if (const auto* c = std::get_if<CalibrateProbabilities>(&probs)) {
    if (config.kind != ConfigKind::kCalibrate) throw std::invalid_argument("probability kind");
    const std::vector<std::int64_t> cells =
        multinomial(rng, trials, {c->p_si, c->p_s - c->p_si, c->p_i - c->p_si});
    r.counts["SI"] = static_cast<double>(cells[0]);
    r.counts["S"] = static_cast<double>(cells[0] + cells[1]);
    r.counts["I"] = static_cast<double>(cells[0] + cells[2]);
  } else if (const auto* q = std::get_if<ClickProbability>(&probs)) {
    if (config.kind != ConfigKind::kPopulation && config.kind != ConfigKind::kFidelity) {
      throw std::invalid_argument("probability kind");
    }
    r.counts["click"] = static_cast<double>(binomial(rng, trials, q->q));
  } else {
    const auto& t = std::get<ThreePhotonProbabilities>(probs);
    if (config.kind != ConfigKind::kThreePhoton) throw std::invalid_argument("probability kind");
    const std::int64_t heralds = binomial(rng, trials, t.q1);
    std::vector<std::int64_t> cells(3, 0);
    if (t.q1 > 0) {
      cells = multinomial(rng, heralds,
                          {t.q123 / t.q1, (t.q12 - t.q123) / t.q1, (t.q13 - t.q123) / t.q1});
    }
    r.counts["1"] = static_cast<double>(heralds);
    r.counts["123"] = static_cast<double>(cells[0]);
    r.counts["12"] = static_cast<double>(cells[0] + cells[1]);
    r.counts["13"] = static_cast<double>(cells[0] + cells[2]);
  }
  return r;
}

CountsRecord expected_counts(const AodConfig& config, const EventProbabilities& probs,
                             std::int64_t trials) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const double n = static_cast<double>(trials);
  CountsRecord r{config, trials, {}, 0};
  if (const auto* c = std::get_if<CalibrateProbabilities>(&probs)) {
    r.counts = {{"S", c->p_s * n}, {"I", c->p_i * n}, {"SI", c->p_si * n}};
  } else if (const auto* q = std::get_if<ClickProbability>(&probs)) {
    r.counts = {{"click", q->q * n}};
  } else {
    const auto& t = std::get<ThreePhotonProbabilities>(probs);
    r.counts = {{"1", t.q1 * n}, {"12", t.q12 * n}, {"13", t.q13 * n}, {"123", t.q123 * n}};
  }
  return r;
}

std::vector<PlanEntry> full_plan(const ExperimentModel& model) {
  std::vector<PlanEntry> plan;
  for (int i = 0; i < model.n_modes; ++i) {
    plan.push_back({AodConfig{ConfigKind::kCalibrate, i}, model.trials.calibrate});
  }
  for (int i = 0; i < model.n_modes; ++i) {
    plan.push_back({AodConfig{ConfigKind::kPopulation, i}, model.trials.population});
  }
  plan.push_back({AodConfig{ConfigKind::kFidelity, -1}, model.trials.fidelity});
  plan.push_back({AodConfig{ConfigKind::kThreePhoton, -1}, model.trials.three_photon});
  return plan;
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

namespace {

void check_plan(const ExperimentModel& model, const std::vector<PlanEntry>& plan) {
  std::set<AodConfig> present;
  for (const PlanEntry& e : plan) present.insert(e.config);
  std::string missing;
  for (const PlanEntry& e : full_plan(model)) {
    if (!present.count(e.config)) missing += (missing.empty() ? "" : ", ") + e.config.label();
  }
  if (!missing.empty()) throw AnalysisError(ErrorCode::kInvalidPlan, "plan lacks " + missing);
}

}  // namespace

CountsDataset run_campaign(const ExperimentModel& model, const std::vector<PlanEntry>& plan,
                           std::uint64_t seed, bool strict) {
  model.validate();
  if (strict) check_plan(model, plan);
  CountsDataset out;
  out.mode = DatasetMode::kSampled;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const PlanEntry& e = plan[i];
    out.records.push_back(sample_counts(e.config, event_probabilities(model, e.config), e.trials,
                                        sub_seed(seed, i)));
  }
  return out;
}

CountsDataset analytic_campaign(const ExperimentModel& model,
                                const std::vector<PlanEntry>& plan) {
  model.validate();
  CountsDataset out;
  out.mode = DatasetMode::kAnalytic;
  for (const PlanEntry& e : plan) {
    out.records.push_back(expected_counts(e.config, event_probabilities(model, e.config), e.trials));
  }
  return out;
}

}  // namespace wdepth
