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

#include "wdepth/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "wdepth/errors.h"
#include "wdepth/inference.h"
#include "wdepth/kv_file.h"

namespace wdepth {

namespace {

using Entries = std::vector<std::pair<std::string, std::string>>;

// Fixed-precision rendering for the human-readable tables.
std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::string sector_name(WitnessSector sector) {
  switch (sector) {
    case WitnessSector::kSpinCorrected:
      return "spin-corrected";
    case WitnessSector::kSpinRaw:
      return "spin-raw";
    case WitnessSector::kPhotonic:
      return "photonic";
  }
  return "unknown";
}

WitnessSector parse_sector(const std::string& name) {
  if (name == "spin-corrected") return WitnessSector::kSpinCorrected;
  if (name == "spin-raw") return WitnessSector::kSpinRaw;
  if (name == "photonic") return WitnessSector::kPhotonic;
  throw std::invalid_argument("unknown witness sector '" + name +
                              "' (expected spin-corrected, spin-raw or photonic)");
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw std::invalid_argument("key '" + key + "' must be true or false");
}

int checked_int(std::int64_t value, const std::string& key, std::int64_t lo) {
  if (value < lo || value > std::numeric_limits<int>::max()) {
    throw std::invalid_argument("key '" + key + "' out of range");
  }
  return static_cast<int>(value);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Opens an output file up front so an unwritable path fails before any work.
std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot write " + path);
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string to_text(const Entries& entries) {
  std::ostringstream ss;
  write_key_values(ss, entries);
  return ss.str();
}

void append_populations(Entries& e, const std::string& prefix, const Populations& p) {
  e.emplace_back(prefix + "p0", format_number(p.p0));
  e.emplace_back(prefix + "p1", format_number(p.p1));
  e.emplace_back(prefix + "p2", format_number(p.p2));
  e.emplace_back(prefix + "F", format_number(p.fidelity));
}

RunConfig config_for(const CliOptions& options, bool require_model) {
  RunConfig config;
  if (!options.config_path.empty()) {
    config = load_run_config(options.config_path, require_model);
  } else if (require_model) {
    throw std::invalid_argument("--config is required");
  }
  if (options.seed) config.seed = *options.seed;
  if (options.slack) config.slack = *options.slack;
  if (options.samples) config.n_samples = *options.samples;
  if (options.reoptimize) config.reoptimize = true;
  if (!options.out.empty()) config.output = options.out;
  if (!(config.slack >= 0.0) || !std::isfinite(config.slack)) {
    throw std::invalid_argument("slack must be a finite non-negative number");
  }
  if (config.n_samples < 100) throw std::invalid_argument("bootstrap needs at least 100 samples");
  return config;
}

void require_seed(const CliOptions& options) {
  if (!options.seed && options.config_path.empty()) {
    throw std::invalid_argument("a seed is required: pass --seed or a --config with seed");
  }
}

const std::string& single_input(const CliOptions& options, const char* what) {
  if (options.inputs.size() != 1) {
    throw std::invalid_argument(std::string("expected exactly one ") + what);
  }
  return options.inputs.front();
}

CountsDataset load_dataset(const std::string& path) {
  CountsDataset d = read_dataset_file(path);
  d.validate();
  return d;
}

// Witness triples `alpha beta gamma k n`, separated by whitespace or commas.
std::vector<WitnessParams> read_triples(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<WitnessParams> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    const std::string where = path + ":" + std::to_string(number);
    if (tokens.size() != 5) {
      throw std::invalid_argument(where + ": expected 'alpha beta gamma k n'");
    }
    std::istringstream row("alpha=" + tokens[0] + "\nbeta=" + tokens[1] + "\ngamma=" +
                           tokens[2] + "\nk=" + tokens[3] + "\nn=" + tokens[4] + "\n");
    const KeyValueFile kv = KeyValueFile::parse(row, where);
    WitnessParams p;
    p.alpha = kv.get_double("alpha");
    p.beta = kv.get_double("beta");
    p.gamma = kv.get_double("gamma");
    p.k = checked_int(kv.get_int("k"), where + ": k", 1);
    p.n = checked_int(kv.get_int("n"), where + ": n", 1);
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
    out.push_back(p);
  }
  if (out.empty()) throw std::invalid_argument(path + ": no witness triples");
  return out;
}

// First line that is neither blank nor a comment decides the input kind.
bool looks_like_key_values(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    return line.find('=') != std::string::npos;
  }
  return false;
}

std::vector<double> parse_dump(const std::string& text, const std::string& path) {
  std::istringstream in(text);
  std::vector<double> values;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    char* end = nullptr;
    const double v = std::strtod(line.c_str() + first, &end);
    const auto rest = std::string(end).find_first_not_of(" \t\r");
    if (end == line.c_str() + first || rest != std::string::npos || !std::isfinite(v)) {
      throw std::invalid_argument(path + ":" + std::to_string(number) + ": not a number");
    }
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument(path + ": empty distribution dump");
  return values;
}

// Rows of the certificate comparison table, in display order.
const std::vector<std::string>& report_rows() {
  static const std::vector<std::string> rows{"p0",  "p1",  "p2",  "F",      "p0p",
                                             "p1p", "p2p", "Fp",  "witness"};
  return rows;
}

struct CertificateView {
  std::string label;
  KeyValueFile kv;
};

std::string cell(const KeyValueFile& kv, const std::string& key) {
  return kv.has(key) ? kv.get(key) : "";
}

std::string certificate_csv(const std::vector<CertificateView>& certs) {
  std::string csv = "quantity";
  for (const CertificateView& c : certs) {
    csv += "," + c.label + "," + c.label + "_lo," + c.label + "_hi";
  }
  csv += '\n';
  for (const char* key : {"status", "k", "confidence", "alpha", "beta", "gamma"}) {
    csv += key;
    for (const CertificateView& c : certs) csv += "," + cell(c.kv, key) + ",,";
    csv += '\n';
  }
  for (const std::string& row : report_rows()) {
    csv += row;
    for (const CertificateView& c : certs) {
      csv += "," + cell(c.kv, "estimate." + row) + "," + cell(c.kv, "interval." + row + ".lo") +
             "," + cell(c.kv, "interval." + row + ".hi");
    }
    csv += '\n';
  }
  return csv;
}

std::string certificate_table(const std::vector<CertificateView>& certs) {
  const auto number = [](const KeyValueFile& kv, const std::string& key, int digits) {
    if (!kv.has(key)) return std::string("-");
    const double v = kv.get_double(key);
    if (v != 0.0 && std::abs(v) < 1e-3) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
      return std::string(buf);
    }
    return fixed(v, digits);
  };
  std::ostringstream t;
  for (const CertificateView& c : certs) {
    t << c.label << ": " << cell(c.kv, "status");
    if (cell(c.kv, "status") == "certified") {
      t << " k=" << cell(c.kv, "k") << " of N=" << cell(c.kv, "n_modes")
        << " confidence=" << number(c.kv, "confidence", 5) << " alpha=" << number(c.kv, "alpha", 4)
        << " beta=" << number(c.kv, "beta", 4) << " gamma=" << number(c.kv, "gamma", 4);
    }
    t << '\n';
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-8s", "");
  t << buf;
  for (const CertificateView& c : certs) {
    std::snprintf(buf, sizeof buf, " %30s", c.label.c_str());
    t << buf;
  }
  t << '\n';
  for (const std::string& row : report_rows()) {
    std::snprintf(buf, sizeof buf, "%-8s", row.c_str());
    t << buf;
    for (const CertificateView& c : certs) {
      std::string text = number(c.kv, "estimate." + row, 4);
      if (c.kv.has("interval." + row + ".lo")) {
        text += " [" + number(c.kv, "interval." + row + ".lo", 4) + ", " +
                number(c.kv, "interval." + row + ".hi", 4) + "]";
      }
      std::snprintf(buf, sizeof buf, " %30s", text.c_str());
      t << buf;
    }
    t << '\n';
  }
  return t.str();
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::string& source, bool require_model) {
  const KeyValueFile kv = KeyValueFile::parse(in, source);
  RunConfig c;
  c.schema_version = kv.get("schema_version");
  if (c.schema_version != "v1") {
    throw std::invalid_argument(source + ": unsupported schema_version '" + c.schema_version + "'");
  }
  if (!kv.has("seed")) throw std::invalid_argument(source + ": missing key 'seed'");
  c.seed = kv.get_uint("seed");

  const std::string mode = kv.get_or("mode", "sampled");
  if (mode == "sampled") {
    c.mode = DatasetMode::kSampled;
  } else if (mode == "analytic") {
    c.mode = DatasetMode::kAnalytic;
  } else {
    throw std::invalid_argument(source + ": mode must be sampled or analytic");
  }

  if (kv.has("model.n_modes")) {
    const int n = checked_int(kv.get_int("model.n_modes"), "model.n_modes", 2);
    ExperimentModel m = ExperimentModel::defaults(n);
    m.lambda = kv.get_double_or("model.lambda", m.lambda);
    if (kv.has("model.excite.weights") || kv.has("model.excite.phases")) {
      const std::vector<double> w =
          kv.get_list_or("model.excite.weights", std::vector<double>(n, 1.0));
      const std::vector<double> ph = kv.get_list_or("model.excite.phases", {});
      m.excite = ModeWeights::from_unnormalized(w, ph);
    }
    if (kv.has("model.eta")) {
      m.eta = kv.get_list("model.eta");
      // A single value applies to every ensemble.
      if (m.eta.size() == 1) m.eta.assign(n, m.eta.front());
    }
    m.signal_efficiency = kv.get_double_or("model.signal_efficiency", m.signal_efficiency);
    m.signal_dark = kv.get_double_or("model.signal_dark", m.signal_dark);
    m.idler_dark = kv.get_double_or("model.idler_dark", m.idler_dark);
    m.memory_loss = kv.get_double_or("model.memory_loss", m.memory_loss);
    m.trials.calibrate = kv.get_int_or("trials.calibrate", m.trials.calibrate);
    m.trials.population = kv.get_int_or("trials.population", m.trials.population);
    m.trials.fidelity = kv.get_int_or("trials.fidelity", m.trials.fidelity);
    m.trials.three_photon = kv.get_int_or("trials.three_photon", m.trials.three_photon);
    try {
      m.validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(source + ": " + e.what());
    }
    c.model = m;
  } else if (require_model) {
    throw std::invalid_argument(source + ": missing key 'model.n_modes'");
  }

  SearchOptions& s = c.search;
  s.beta_step = kv.get_double_or("witness.beta_step", s.beta_step);
  s.alpha_log_points = checked_int(
      kv.get_int_or("witness.alpha_log_points", s.alpha_log_points), "witness.alpha_log_points", 0);
  s.alpha_log_min = kv.get_double_or("witness.alpha_log_min", s.alpha_log_min);
  s.alpha_linear_step = kv.get_double_or("witness.alpha_linear_step", s.alpha_linear_step);
  s.gamma_max = kv.get_double_or("witness.gamma_max", s.gamma_max);
  s.refine_factor =
      checked_int(kv.get_int_or("witness.refine_factor", s.refine_factor), "witness.refine_factor", 1);
  s.final_slack = kv.get_double_or("witness.final_slack", s.final_slack);
  if (!(s.beta_step > 0) || !(s.alpha_linear_step > 0) || !(s.alpha_log_min > 0) ||
      !(s.gamma_max > 0) || !(s.final_slack >= 0)) {
    throw std::invalid_argument(source + ": witness search settings must be positive");
  }
  c.slack = kv.get_double_or("witness.slack", c.slack);

  c.n_samples =
      checked_int(kv.get_int_or("bootstrap.samples", c.n_samples), "bootstrap.samples", 1);
  if (kv.has("bootstrap.sector")) c.sector = parse_sector(kv.get("bootstrap.sector"));
  if (kv.has("bootstrap.reoptimize")) {
    c.reoptimize = parse_bool(kv.get("bootstrap.reoptimize"), "bootstrap.reoptimize");
  }
  c.threads = checked_int(kv.get_int_or("bootstrap.threads", 0), "bootstrap.threads", 0);
  c.output = kv.get_or("output", "");

  const std::vector<std::string> unread = kv.unread_keys();
  if (!unread.empty()) {
    std::string list;
    for (const std::string& k : unread) list += (list.empty() ? "" : ", ") + k;
    throw std::invalid_argument(source + ": unknown keys: " + list);
  }
  return c;
}

RunConfig load_run_config(const std::string& path, bool require_model) {
  std::istringstream in(read_file(path));
  return parse_run_config(in, path, require_model);
}

std::string histogram_csv(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("histogram of no values");
  constexpr int kBins = 100;
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / kBins;
  std::vector<long long> counts(kBins, 0);
  for (double v : values) {
    const int bin = std::min(kBins - 1, static_cast<int>((v - lo) / width));
    ++counts[bin];
  }
  std::string csv = "bin,lo,hi,count\n";
  for (int b = 0; b < kBins; ++b) {
    const double edge_hi = b + 1 == kBins ? hi : lo + (b + 1) * width;
    csv += std::to_string(b) + "," + format_number(lo + b * width) + "," +
           format_number(edge_hi) + "," + std::to_string(counts[b]) + "\n";
  }
  return csv;
}

int cmd_validate_witness(const CliOptions& options, std::ostream& out, std::ostream&) {
  const RunConfig config = config_for(options, false);
  const std::vector<WitnessParams> triples =
      read_triples(single_input(options, "witness parameter file"));
  std::ostringstream text;
  int passed = 0;
  for (const WitnessParams& p : triples) {
    const MinResult m = min_f(p);
    const bool ok = m.f_min >= -config.slack;
    passed += ok;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "%s alpha=%.10g beta=%.10g gamma=%.10g k=%d n=%d f_min=%.6e l=%d "
                  "theta1=%.6f theta2=%.6f method=%s\n",
                  ok ? "PASS" : "FAIL", p.alpha, p.beta, p.gamma, p.k, p.n, m.f_min, m.argmin.l,
                  m.argmin.theta1, m.argmin.theta2, to_string(m.method));
    text << buf;
  }
  text << passed << "/" << triples.size() << " feasible with slack "
       << format_number(config.slack) << '\n';
  if (options.out.empty()) {
    out << text.str();
  } else {
    std::ofstream f = open_output(options.out);
    f << text.str();
    finish_output(f, options.out);
    out << text.str();
  }
  return passed == static_cast<int>(triples.size()) ? kExitSuccess : kExitAnalysisFailure;
}

int cmd_simulate(const CliOptions& options, std::ostream& out, std::ostream&) {
  const RunConfig config = config_for(options, true);
  if (config.output.empty()) throw std::invalid_argument("an output path is required (--out)");
  const std::string truth_path = config.output + ".truth";
  std::ofstream data_file = open_output(config.output);
  std::ofstream truth_file = open_output(truth_path);

  const ExperimentModel& model = config.model;
  const std::vector<PlanEntry> plan = full_plan(model);
  const CountsDataset dataset = config.mode == DatasetMode::kAnalytic
                                    ? analytic_campaign(model, plan)
                                    : run_campaign(model, plan, config.seed);
  write_dataset(data_file, dataset);
  finish_output(data_file, config.output);

  const GroundTruth truth = ground_truth(model);
  Entries e{{"schema_version", "v1"},
            {"seed", std::to_string(config.seed)},
            {"mode", std::string(to_string(config.mode))},
            {"n_modes", std::to_string(model.n_modes)},
            {"records", std::to_string(dataset.records.size())},
            {"lambda", format_number(model.lambda)}};
  append_populations(e, "spin.", truth.estimate.spin);
  append_populations(e, "photonic.", truth.estimate.photonic);
  e.emplace_back("alpha3", format_number(truth.estimate.alpha3));
  e.emplace_back("lambda_poisson", format_number(truth.estimate.lambda_poisson));
  e.emplace_back("p2_over_p1",
                 format_number(truth.estimate.spin.p2 / truth.estimate.spin.p1));
  e.emplace_back("tail_mass", format_number(truth.tail_mass));
  e.emplace_back("herald_probability", format_number(truth.herald_probability));
  e.emplace_back("dark_fraction", format_number(truth.dark_fraction));
  e.emplace_back("w_overlap", format_number(truth.w_overlap));
  truth_file << to_text(e);
  finish_output(truth_file, truth_path);
  out << "wrote " << dataset.records.size() << " records to " << config.output << '\n';
  return kExitSuccess;
}

int cmd_infer(const CliOptions& options, std::ostream& out, std::ostream& err) {
  const CountsDataset dataset = load_dataset(single_input(options, "dataset"));
  std::ofstream file;
  if (!options.out.empty()) file = open_output(options.out);
  const InferenceReport report = full_pipeline(dataset, options.n.value_or(0));
  for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
  if (options.out.empty()) {
    out << format_report(report);
  } else {
    file << format_report(report);
    finish_output(file, options.out);
  }
  return kExitSuccess;
}

int cmd_certify(const CliOptions& options, std::ostream& out, std::ostream& err) {
  require_seed(options);
  const RunConfig config = config_for(options, false);
  if (config.output.empty()) throw std::invalid_argument("an output path is required (--out)");
  const CountsDataset dataset = load_dataset(single_input(options, "dataset"));
  const int n = options.n.value_or(dataset.n_modes());
  if (n < 2) throw std::invalid_argument("--n must be at least 2");
  const std::string dump_path = config.output + ".dist";
  std::ofstream cert_file = open_output(config.output);
  std::ofstream dump_file = open_output(dump_path);

  const InferenceReport report = full_pipeline(dataset, n);
  for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
  const Populations& pops = select_populations(report.raw, report.corrected, config.sector);

  BootstrapOptions bo;
  bo.n_samples = config.n_samples;
  bo.seed = config.seed;
  bo.sector = config.sector;
  bo.reoptimize = config.reoptimize;
  bo.search = config.search;
  bo.expected_modes = n;
  bo.threads = config.threads;
  std::optional<BootstrapResult> boot;
  const ConfidenceFn confidence = [&](const WitnessParams& params) {
    boot = bootstrap_pipeline(dataset, params, bo);
    return boot->confidence_negative;
  };
  const DepthCertificate cert = certify_depth(pops, n, confidence, config.search);

  const Populations& spin =
      config.sector == WitnessSector::kSpinRaw ? report.raw.spin : report.corrected.spin;
  Entries e{{"schema_version", "v1"},
            {"status", cert.certified ? "certified" : "not certified"},
            {"n_modes", std::to_string(n)},
            {"sector", sector_name(config.sector)},
            {"seed", std::to_string(config.seed)}};
  if (cert.certified) {
    e.emplace_back("k", std::to_string(cert.k));
    e.emplace_back("alpha", format_number(cert.params.alpha));
    e.emplace_back("beta", format_number(cert.params.beta));
    e.emplace_back("gamma", format_number(cert.params.gamma));
    e.emplace_back("confidence", format_number(cert.confidence));
  }
  if (cert.certified) e.emplace_back("estimate.witness", format_number(cert.witness_value));
  e.emplace_back("estimate.p0", format_number(spin.p0));
  e.emplace_back("estimate.p1", format_number(spin.p1));
  e.emplace_back("estimate.p2", format_number(spin.p2));
  e.emplace_back("estimate.F", format_number(spin.fidelity));
  e.emplace_back("estimate.p0p", format_number(report.raw.photonic.p0));
  e.emplace_back("estimate.p1p", format_number(report.raw.photonic.p1));
  e.emplace_back("estimate.p2p", format_number(report.raw.photonic.p2));
  e.emplace_back("estimate.Fp", format_number(report.raw.photonic.fidelity));
  if (cert.certified && boot) {
    const BootstrapSummary summary = confidence_and_intervals(*boot);
    e.emplace_back("bootstrap.samples", std::to_string(summary.n_samples));
    e.emplace_back("bootstrap.failures", std::to_string(summary.failures));
    e.emplace_back("bootstrap.reoptimize", config.reoptimize ? "true" : "false");
    for (const auto& [name, interval] : summary.intervals) {
      e.emplace_back("interval." + name + ".lo", format_number(interval.lo));
      e.emplace_back("interval." + name + ".hi", format_number(interval.hi));
    }
    for (std::size_t i = 0; i < boot->failure_reasons.size(); ++i) {
      e.emplace_back("bootstrap.failure." + std::to_string(i), boot->failure_reasons[i]);
    }
    dump_file << distribution_dump(*boot);
  }
  for (const DepthScanEntry& s : cert.scan) {
    e.emplace_back("scan." + std::to_string(s.k), format_number(s.value));
  }
  e.emplace_back("warnings", std::to_string(report.warnings.size()));
  cert_file << to_text(e);
  finish_output(cert_file, config.output);
  finish_output(dump_file, dump_path);
  if (cert.certified) {
    out << "certified depth " << cert.k << " of " << n << " with confidence "
        << format_number(cert.confidence) << '\n';
  } else {
    out << "not certified\n";
  }
  return kExitSuccess;
}

int cmd_report(const CliOptions& options, std::ostream& out, std::ostream&) {
  if (options.inputs.empty()) throw std::invalid_argument("report needs at least one input");
  std::vector<CertificateView> certs;
  std::vector<std::pair<std::string, std::vector<double>>> dumps;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < options.inputs.size(); ++i) {
    const std::string& path = options.inputs[i];
    const std::string text = read_file(path);
    if (looks_like_key_values(text)) {
      std::istringstream in(text);
      std::string label = std::filesystem::path(path).stem().string();
      if (label.empty() || !labels.insert(label).second) label = "input" + std::to_string(i);
      KeyValueFile kv = KeyValueFile::parse(in, path);
      if (!kv.has("status") || kv.get("schema_version") != "v1") {
        throw std::invalid_argument(path + ": not a v1 certificate");
      }
      certs.push_back({label, std::move(kv)});
    } else {
      dumps.emplace_back(path, parse_dump(text, path));
    }
  }
  if (!certs.empty() && !dumps.empty()) {
    throw std::invalid_argument("report takes certificates or one distribution dump, not both");
  }
  if (dumps.size() > 1) throw std::invalid_argument("report takes one distribution dump");

  std::string csv;
  std::string table;
  if (!dumps.empty()) {
    const std::vector<double>& v = dumps.front().second;
    csv = histogram_csv(v);
    double sum = 0.0;
    std::size_t negative = 0;
    for (double x : v) {
      sum += x;
      negative += x < 0.0;
    }
    std::ostringstream t;
    t << "samples " << v.size() << "\nmin " << format_number(*std::min_element(v.begin(), v.end()))
      << "\nmax " << format_number(*std::max_element(v.begin(), v.end())) << "\nmean "
      << format_number(sum / v.size()) << "\nfraction negative "
      << format_number(static_cast<double>(negative) / v.size()) << '\n';
    table = t.str();
  } else {
    csv = certificate_csv(certs);
    table = certificate_table(certs);
  }
  if (options.out.empty()) {
    out << csv << '\n' << table;
  } else {
    std::ofstream f = open_output(options.out);
    f << csv;
    finish_output(f, options.out);
    out << table;
  }
  return kExitSuccess;
}

int run_command(const std::string& command, const CliOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    if (command == "validate-witness") return cmd_validate_witness(options, out, err);
    if (command == "simulate") return cmd_simulate(options, out, err);
    if (command == "infer") return cmd_infer(options, out, err);
    if (command == "certify") return cmd_certify(options, out, err);
    if (command == "report") return cmd_report(options, out, err);
    err << "error: unknown command '" << command << "'\n";
    return kExitInputError;
  } catch (const AnalysisError& e) {
    err << "error: " << e.what() << '\n';
    return kExitAnalysisFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement-depth certification for W-type states"};
  app.require_subcommand(1);
  CliOptions options;
  std::uint64_t seed = 0;
  double slack = 0.0;
  int samples = 0;
  int n = 0;

  struct Command {
    const char* name;
    const char* help;
    const char* inputs;
  };
  const Command commands[] = {
      {"validate-witness", "Check witness triples for feasibility", "witness parameter file"},
      {"simulate", "Simulate a photon-counting campaign", nullptr},
      {"infer", "Estimate populations from a dataset", "dataset file"},
      {"certify", "Certify entanglement depth with bootstrap confidence", "dataset file"},
      {"report", "Tabulate certificates or histogram a distribution dump",
       "certificates or one distribution dump"},
  };
  std::map<std::string, CLI::App*> subs;
  std::map<std::string, std::map<std::string, CLI::Option*>> flags;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    auto& f = flags[c.name];
    f["config"] = sub->add_option("--config", options.config_path, "Run configuration file");
    f["out"] = sub->add_option("--out", options.out, "Output path");
    if (c.inputs) sub->add_option("inputs", options.inputs, c.inputs)->required();
    subs[c.name] = sub;
  }
  for (const char* name : {"simulate", "certify"}) {
    flags[name]["seed"] = subs[name]->add_option("--seed", seed, "Seed override");
  }
  flags["validate-witness"]["slack"] =
      subs["validate-witness"]->add_option("--slack", slack, "Feasibility slack");
  flags["certify"]["samples"] =
      subs["certify"]->add_option("--samples", samples, "Bootstrap resamples");
  subs["certify"]->add_flag("--reoptimize-per-resample", options.reoptimize,
                            "Re-optimize witness parameters on every resample");
  for (const char* name : {"infer", "certify"}) {
    flags[name]["n"] = subs[name]->add_option("--n", n, "Number of ensembles");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitInputError;
  }
  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) command = name;
  }
  const auto given = [&](const char* key) {
    const auto& f = flags[command];
    const auto it = f.find(key);
    return it != f.end() && it->second->count() > 0;
  };
  if (given("seed")) options.seed = seed;
  if (given("slack")) options.slack = slack;
  if (given("samples")) options.samples = samples;
  if (given("n")) options.n = n;
  return run_command(command, options, out, err);
}

}  // namespace wdepth
