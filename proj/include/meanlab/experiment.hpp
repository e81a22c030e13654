#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "meanlab/alzer.hpp"
#include "meanlab/matrix_gen.hpp"
#include "meanlab/matrix_io.hpp"
#include "meanlab/rng.hpp"

namespace meanlab {

enum class ExperimentMode { Thm32, Corollary, OpenProblem };
enum class StoreInputs { OnViolation, Always, Never };

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::Thm32;
  long trials = 0;
  int dim = 2;
  int n_ops = 3;  // open-problem only
  std::vector<double> lambda_grid = {0.5};
  bool commuting = true;
  bool ordered = true;
  double spectrum_lo = 0.01;
  double spectrum_hi = 0.5;
  std::uint64_t seed = 0;
  StoreInputs store_inputs = StoreInputs::OnViolation;

  void validate() const {
    if (trials < 0) throw ConfigError("config: trials must be >= 0");
    if (dim < 1) throw ConfigError("config: dim must be >= 1");
    if (!(spectrum_lo > 0 && spectrum_lo < spectrum_hi))
      throw ConfigError("config: need 0 < spectrum_lo < spectrum_hi");
    if (mode == ExperimentMode::Thm32) {
      if (lambda_grid.empty()) throw ConfigError("config: lambda_grid is empty");
      for (double l : lambda_grid)
        if (!(l > 0.0 && l < 1.0))
          throw ConfigError("config: lambda values must lie in (0,1)");
    }
    if (mode == ExperimentMode::OpenProblem) {
      if (n_ops < 2) throw ConfigError("config: n_ops must be >= 2");
      if (ordered) throw ConfigError("config: ordered pairs do not apply to open-problem mode");
    }
  }
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> records;  // ordered by trial_id
  long violations = 0;
  double min_gap_min_eig = 0;
  double wall_time_s = 0;
};

inline const char* to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::Thm32: return "thm32";
    case ExperimentMode::Corollary: return "corollary";
    case ExperimentMode::OpenProblem: return "open-problem";
  }
  return "?";
}

inline const char* to_string(StoreInputs s) {
  switch (s) {
    case StoreInputs::OnViolation: return "on-violation";
    case StoreInputs::Always: return "always";
    case StoreInputs::Never: return "never";
  }
  return "?";
}

inline ExperimentMode mode_from_string(const std::string& s) {
  if (s == "thm32") return ExperimentMode::Thm32;
  if (s == "corollary") return ExperimentMode::Corollary;
  if (s == "open-problem") return ExperimentMode::OpenProblem;
  throw ConfigError("unknown mode: " + s);
}

inline StoreInputs store_from_string(const std::string& s) {
  if (s == "on-violation") return StoreInputs::OnViolation;
  if (s == "always") return StoreInputs::Always;
  if (s == "never") return StoreInputs::Never;
  throw ConfigError("unknown store_inputs policy: " + s);
}

namespace detail {

// One trial, a pure function of (config, trial_id).
inline TrialRecord run_trial(const ExperimentConfig& cfg, long t,
                             const Tolerance& tol) {
  const std::uint64_t seed_t = trial_seed(cfg.seed, static_cast<std::uint64_t>(t));
  TrialRecord rec;
  if (cfg.mode == ExperimentMode::OpenProblem) {
    EnsembleSpec spec{cfg.dim, cfg.spectrum_lo, cfg.spectrum_hi, cfg.n_ops,
                      cfg.commuting, false, seed_t};
    const std::vector<SymMatrixd> inputs = random_spd(spec);
    rec = open_problem_trial(inputs, tol);

    // Permutation probe: G_m is order-dependent for m >= 3, so one shuffled
    // rerun per trial is recorded alongside.
    std::vector<size_t> perm(inputs.size());
    std::iota(perm.begin(), perm.end(), size_t{0});
    SplitMix64 prng(mix64(seed_t ^ 0x7065726dull));
    for (size_t i = perm.size() - 1; i > 0; --i)
      std::swap(perm[i], perm[prng.below(i + 1)]);
    std::vector<SymMatrixd> shuffled;
    shuffled.reserve(inputs.size());
    for (size_t i : perm) shuffled.push_back(inputs[i]);
    rec.perm_gap_min_eig = open_problem_trial(shuffled, tol).gap_min_eig;

    if (cfg.store_inputs == StoreInputs::Always ||
        (cfg.store_inputs == StoreInputs::OnViolation && rec.violated))
      rec.inputs = inputs;
  } else {
    EnsembleSpec spec{cfg.dim, cfg.spectrum_lo, cfg.spectrum_hi, 2,
                      cfg.commuting, cfg.ordered, seed_t};
    const std::vector<SymMatrixd> pair = random_spd(spec);
    if (cfg.mode == ExperimentMode::Thm32) {
      const double l = cfg.lambda_grid[static_cast<size_t>(t) % cfg.lambda_grid.size()];
      rec = operator_alzer_check(pair[0], pair[1], Weight(l), tol);
    } else {
      rec = classic_corollary_check(pair[0], pair[1], tol);
    }
    if (cfg.store_inputs == StoreInputs::Always ||
        (cfg.store_inputs == StoreInputs::OnViolation && rec.violated))
      rec.inputs = pair;
  }
  rec.trial_id = t;
  rec.seed = seed_t;
  return rec;
}

inline unsigned worker_count(long trials) {
  unsigned n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("MEANLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  if (n < 1) n = 1;
  if (trials >= 0 && static_cast<long>(n) > trials) n = static_cast<unsigned>(std::max(1L, trials));
  return n;
}

}  // namespace detail

// Runs the configured ensemble. Trials are independent; each derives its seed
// from (master seed, trial_id), and records are assembled by trial_id, so the
// report is byte-identical for any worker count.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                       const Tolerance& tol = {}) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  ExperimentReport rep;
  rep.config = cfg;
  rep.records.resize(static_cast<size_t>(cfg.trials));
  const unsigned workers = detail::worker_count(cfg.trials);
  if (cfg.trials > 0) {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (long t = w; t < cfg.trials; t += workers)
            rep.records[static_cast<size_t>(t)] = detail::run_trial(cfg, t, tol);
        } catch (...) {
          errs[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }

  rep.violations = 0;
  rep.min_gap_min_eig = 0;
  for (size_t i = 0; i < rep.records.size(); ++i) {
    if (rep.records[i].violated) ++rep.violations;
    if (i == 0 || rep.records[i].gap_min_eig < rep.min_gap_min_eig)
      rep.min_gap_min_eig = rep.records[i].gap_min_eig;
  }
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline std::string config_to_json(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "{\"config\": {\"mode\": \"" << to_string(c.mode) << "\""
     << ", \"trials\": " << c.trials << ", \"dim\": " << c.dim
     << ", \"n_ops\": " << c.n_ops << ", \"lambda_grid\": [";
  for (size_t i = 0; i < c.lambda_grid.size(); ++i)
    os << (i ? ", " : "") << format_double(c.lambda_grid[i]);
  os << "], \"commuting\": " << (c.commuting ? "true" : "false")
     << ", \"ordered\": " << (c.ordered ? "true" : "false")
     << ", \"spectrum_lo\": " << format_double(c.spectrum_lo)
     << ", \"spectrum_hi\": " << format_double(c.spectrum_hi)
     << ", \"seed\": " << c.seed << ", \"store_inputs\": \""
     << to_string(c.store_inputs) << "\"}}";
  return os.str();
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.mode = mode_from_string(j.at("mode").get<std::string>());
  c.trials = j.at("trials").get<long>();
  c.dim = j.at("dim").get<int>();
  if (j.contains("n_ops")) c.n_ops = j.at("n_ops").get<int>();
  if (j.contains("lambda_grid"))
    c.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
  if (j.contains("commuting")) c.commuting = j.at("commuting").get<bool>();
  if (j.contains("ordered")) c.ordered = j.at("ordered").get<bool>();
  if (j.contains("spectrum_lo")) c.spectrum_lo = j.at("spectrum_lo").get<double>();
  if (j.contains("spectrum_hi")) c.spectrum_hi = j.at("spectrum_hi").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("store_inputs"))
    c.store_inputs = store_from_string(j.at("store_inputs").get<std::string>());
  c.validate();
  return c;
}

inline std::string trial_to_json(const TrialRecord& r) {
  std::ostringstream os;
  os << "{\"trial_id\": " << r.trial_id << ", \"seed\": " << r.seed
     << ", \"n_ops\": " << r.n_ops << ", \"dim\": " << r.dim << ", \"lambda\": ";
  if (r.lambda)
    os << format_double(*r.lambda);
  else
    os << "null";
  os << ", \"commuting\": " << (r.commuting ? "true" : "false")
     << ", \"ordered\": " << (r.ordered ? "true" : "false")
     << ", \"in_range\": " << (r.in_range ? "true" : "false")
     << ", \"lambda_in_range\": " << (r.lambda_in_range ? "true" : "false")
     << ", \"gap_min_eig\": " << format_double(r.gap_min_eig)
     << ", \"violated\": " << (r.violated ? "true" : "false")
     << ", \"marginal\": " << (r.marginal ? "true" : "false");
  if (r.symmetry_residual)
    os << ", \"symmetry_residual\": " << format_double(*r.symmetry_residual);
  if (r.perm_gap_min_eig)
    os << ", \"perm_gap_min_eig\": " << format_double(*r.perm_gap_min_eig);
  if (!r.inputs.empty()) {
    os << ", \"inputs\": [";
    for (size_t i = 0; i < r.inputs.size(); ++i)
      os << (i ? ", " : "") << matrix_to_json(r.inputs[i]);
    os << "]";
  }
  os << "}";
  return os.str();
}

// JSON-lines: config echo, one TrialRecord per line, summary object last.
inline std::string serialize_report(const ExperimentReport& rep,
                                    bool include_wall_time = true) {
  std::ostringstream os;
  os << config_to_json(rep.config) << "\n";
  for (const auto& r : rep.records) os << trial_to_json(r) << "\n";
  os << "{\"summary\": {\"trials\": " << rep.records.size()
     << ", \"violations\": " << rep.violations << ", \"min_gap_min_eig\": ";
  if (rep.records.empty())
    os << "null";
  else
    os << format_double(rep.min_gap_min_eig);
  if (include_wall_time) os << ", \"wall_time_s\": " << format_double(rep.wall_time_s);
  os << "}}\n";
  return os.str();
}

struct ParsedReport {
  ExperimentConfig config;
  std::vector<double> gap_min_eigs;  // by trial_id
};

inline ParsedReport parse_report(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  ParsedReport out;
  bool have_config = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    if (j.contains("config")) {
      out.config = config_from_json(j.at("config"));
      have_config = true;
    } else if (j.contains("summary")) {
      break;
    } else {
      out.gap_min_eigs.push_back(j.at("gap_min_eig").get<double>());
    }
  }
  if (!have_config) throw ConfigError("report has no config line");
  return out;
}

struct ReplayResult {
  bool reproduced;
  double max_deviation;
};

// Reruns every trial of a stored report and compares gap_min_eig to 1e-12.
inline ReplayResult replay_report(const std::string& text, const Tolerance& tol = {}) {
  const ParsedReport parsed = parse_report(text);
  ExperimentConfig cfg = parsed.config;
  cfg.trials = static_cast<long>(parsed.gap_min_eigs.size());
  const ExperimentReport rep = run_experiment(cfg, tol);
  double dev = 0;
  for (size_t i = 0; i < parsed.gap_min_eigs.size(); ++i)
    dev = std::max(dev, std::abs(parsed.gap_min_eigs[i] - rep.records[i].gap_min_eig));
  return {dev <= 1e-12, dev};
}

}  // namespace meanlab
