// meanlab - operator-mean laboratory CLI.
//
// Subcommands: mean, series, iterate, gmean, verify, search-open, replay.
// Exit codes: 0 success; 2 flag/config/parse error; 3 domain/precheck error;
// 4 series not converged; 5 inequality violation or replay mismatch.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meanlab/alzer.hpp"
#include "meanlab/experiment.hpp"
#include "meanlab/iterative.hpp"
#include "meanlab/matrix_io.hpp"
#include "meanlab/means.hpp"
#include "meanlab/series.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNotConverged = 4;
constexpr int kExitViolation = 5;

using namespace meanlab;

int cmd_mean(const std::string& op, double lambda, const std::string& a_path,
             const std::string& b_path, const std::string& out) {
  const SymMatrixd a = read_matrix_file(a_path);
  const SymMatrixd b = read_matrix_file(b_path);
  const Weight w(lambda);
  SymMatrixd result = SymMatrixd::zero(a.dim());
  if (op == "nabla")
    result = nabla(a, b, w);
  else if (op == "sharp")
    result = sharp(a, b, w);
  else if (op == "harmonic")
    result = harmonic(a, b, w);
  else
    throw ConfigError("unknown --op: " + op);
  write_matrix_file(out, result);
  return kExitOk;
}

int cmd_series(double lambda, int terms, double target, const std::string& a_path,
               const std::string& b_path, const std::string& out) {
  const SymMatrixd a = read_matrix_file(a_path);
  const SymMatrixd b = read_matrix_file(b_path);
  const Weight w(lambda);
  const SeriesParams params(w, terms, target);
  const SeriesResult<double> res = gap_series(a, b, params);

  std::ostringstream csv;
  csv << "k,coefficient,term_fro_norm,term_min_eig,partial_sum_fro_norm\n";
  for (size_t i = 0; i < res.term_norms.size(); ++i) {
    // coefficient column carries the raw binomial C(1-lambda, k); the
    // alternating sign lives in the series structure, not the coefficient
    csv << (i + 2) << ","
        << format_double(gen_binom(1.0 - lambda, static_cast<int>(i) + 2)) << ","
        << format_double(res.term_norms[i]) << ","
        << format_double(res.per_term_min_eigs[i]) << ","
        << format_double(res.partial_sum_norms[i]) << "\n";
  }
  double identity_residual = std::numeric_limits<double>::quiet_NaN();
  if (res.converged) {
    const SymMatrixd gap = nabla(a, b, w) - sharp(a, b, w);
    identity_residual = (res.partial_sum - gap).frobenius_norm();
  }
  csv << "converged," << (res.converged ? 1 : 0) << ",identity_residual,"
      << format_double(identity_residual) << ",\n";
  write_file_atomic(out, csv.str());
  return res.converged ? kExitOk : kExitNotConverged;
}

int cmd_iterate(const std::string& algo, int m, double tol_stop, int max_iter,
                const std::string& a_path, const std::string& b_path,
                const std::string& out) {
  const SymMatrixd a = read_matrix_file(a_path);
  const SymMatrixd b = read_matrix_file(b_path);
  IterationParams p;
  p.m = m;
  p.tol_stop = tol_stop;
  p.max_iter = max_iter;
  IterationTrace<double> trace;
  if (algo == "tn")
    trace = tn_iteration(a, b, p);
  else if (algo == "ah")
    trace = ah_iteration(a, b, p);
  else
    throw ConfigError("unknown --algo: " + algo);

  std::ostringstream csv;
  csv << "n,residual_fro,bound_fro,min_eig_Tn_minus_limit,asymmetry_norm\n";
  for (size_t n = 0; n < trace.iterates.size(); ++n) {
    csv << n << "," << format_double(trace.residuals[n]) << ","
        << format_double(trace.bound_values[n]) << ","
        << format_double(trace.gap_min_eigs[n]) << ","
        << format_double(trace.asymmetry_norms[n]) << "\n";
  }
  write_file_atomic(out, csv.str());
  return trace.converged ? kExitOk : kExitNotConverged;
}

int cmd_gmean(const std::vector<std::string>& input_paths, const std::string& out) {
  std::vector<SymMatrixd> inputs;
  inputs.reserve(input_paths.size());
  for (const auto& p : input_paths) inputs.push_back(read_matrix_file(p));
  write_matrix_file(out, recursive_geometric(inputs));
  return kExitOk;
}

int cmd_experiment(const ExperimentConfig& cfg, const std::string& report_path) {
  const ExperimentReport rep = run_experiment(cfg);
  write_file_atomic(report_path, serialize_report(rep));
  if (cfg.mode == ExperimentMode::OpenProblem) {
    // Findings, not failures: the inequality is a conjecture.
    std::cout << "open-problem: " << rep.records.size() << " trials, "
              << rep.violations << " finding(s)\n";
    return kExitOk;
  }
  std::cout << to_string(cfg.mode) << ": " << rep.records.size() << " trials, "
            << rep.violations << " violation(s)\n";
  return rep.violations == 0 ? kExitOk : kExitViolation;
}

int cmd_replay(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) throw ConfigError("cannot open report: " + report_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const ReplayResult r = replay_report(buf.str());
  std::cout << "replay: max gap deviation " << format_double(r.max_deviation) << "\n";
  return r.reproduced ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meanlab: weighted operator means, gap series, iterative "
               "geometric means, and Alzer-inequality experiments"};
  app.require_subcommand(1);

  // mean
  std::string op, a_path, b_path, out_path;
  double lambda = 0.5;
  auto* mean = app.add_subcommand("mean", "compute a two-operator mean");
  mean->add_option("--op", op, "nabla|sharp|harmonic")->required();
  // open-interval (0,1) validation happens in Weight's constructor
  mean->add_option("--lambda", lambda, "weight in (0,1)")->required();
  mean->add_option("--a", a_path, "matrix JSON")->required();
  mean->add_option("--b", b_path, "matrix JSON")->required();
  mean->add_option("--out", out_path, "output matrix JSON")->required();

  // series
  int terms = 64;
  double target = 1e-10;
  auto* series = app.add_subcommand("series", "arithmetic-geometric gap series trace");
  series->add_option("--lambda", lambda)->required();
  series->add_option("--terms", terms)->check(CLI::Range(2, 1 << 20));
  series->add_option("--target", target);
  series->add_option("--a", a_path)->required();
  series->add_option("--b", b_path)->required();
  series->add_option("--out", out_path, "output CSV")->required();

  // iterate
  std::string algo = "tn";
  int m = 2, max_iter = 200;
  double tol_stop = 1e-11;
  auto* iterate = app.add_subcommand("iterate", "run the T_n / Phi_n iteration");
  iterate->add_option("--algo", algo, "tn|ah");
  iterate->add_option("--m", m)->check(CLI::Range(2, 64));
  iterate->add_option("--tol-stop", tol_stop);
  iterate->add_option("--max-iter", max_iter)->check(CLI::Range(1, 1 << 20));
  iterate->add_option("--a", a_path)->required();
  iterate->add_option("--b", b_path)->required();
  iterate->add_option("--out", out_path, "output trace CSV")->required();

  // gmean
  std::vector<std::string> input_paths;
  auto* gmean = app.add_subcommand("gmean", "recursive m-operator geometric mean");
  gmean->add_option("--input", input_paths, "matrix JSON files, in order")
      ->required()->expected(1, -1);
  gmean->add_option("--out", out_path)->required();

  // verify / search-open
  ExperimentConfig cfg;
  std::string mode_str = "thm32", store_str = "on-violation", report_path;
  auto add_experiment_flags = [&](CLI::App* c, bool open_problem) {
    c->add_option("--trials", cfg.trials)->required()->check(CLI::Range(0L, 100000000L));
    c->add_option("--dim", cfg.dim)->check(CLI::Range(1, 64));
    c->add_option("--seed", cfg.seed);
    c->add_option("--spectrum-lo", cfg.spectrum_lo);
    c->add_option("--spectrum-hi", cfg.spectrum_hi);
    c->add_option("--store-inputs", store_str, "on-violation|always|never");
    c->add_option("--report", report_path)->required();
    if (open_problem) {
      c->add_option("--n-ops", cfg.n_ops)->check(CLI::Range(2, 64));
      c->add_flag("--commuting,!--no-commuting", cfg.commuting);
    } else {
      c->add_option("--mode", mode_str, "thm32|corollary");
      c->add_option("--lambda-grid", cfg.lambda_grid, "weights in (0,1)");
      c->add_flag("--commuting,!--no-commuting", cfg.commuting);
      c->add_flag("--ordered,!--no-ordered", cfg.ordered);
    }
  };
  auto* verify = app.add_subcommand("verify", "inequality verification ensemble");
  add_experiment_flags(verify, false);
  auto* search = app.add_subcommand("search-open", "open-problem probe ensemble");
  add_experiment_flags(search, true);

  // replay
  auto* replay = app.add_subcommand("replay", "re-run a stored report and compare");
  replay->add_option("--report", report_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitUsage : kExitOk;
  }

  try {
    if (mean->parsed()) return cmd_mean(op, lambda, a_path, b_path, out_path);
    if (series->parsed())
      return cmd_series(lambda, terms, target, a_path, b_path, out_path);
    if (iterate->parsed())
      return cmd_iterate(algo, m, tol_stop, max_iter, a_path, b_path, out_path);
    if (gmean->parsed()) return cmd_gmean(input_paths, out_path);
    if (verify->parsed()) {
      cfg.mode = mode_from_string(mode_str);
      cfg.store_inputs = store_from_string(store_str);
      return cmd_experiment(cfg, report_path);
    }
    if (search->parsed()) {
      cfg.mode = ExperimentMode::OpenProblem;
      cfg.ordered = false;
      cfg.store_inputs = store_from_string(store_str);
      return cmd_experiment(cfg, report_path);
    }
    if (replay->parsed()) return cmd_replay(report_path);
  } catch (const ConfigError& e) {
    std::cerr << "meanlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "meanlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotConverged& e) {
    std::cerr << "meanlab: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const MeanlabError& e) {
    std::cerr << "meanlab: " << e.what() << "\n";
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "meanlab: JSON parse error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
