// divrate: reconstruct the division rate of a size-structured population
// from a sample of sizes.
//
// Subcommands:
//   solve     solve the direct eigenproblem for a (g, B, kappa) model
//   sample    draw sizes from a solved density by rejection sampling
//   estimate  run the full estimation chain on a sample
//   bench     run a replication study from a config file

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "divrate/bandwidth.hpp"
#include "divrate/dilation.hpp"
#include "divrate/eigensolve.hpp"
#include "divrate/harness.hpp"
#include "divrate/models.hpp"
#include "divrate/pipeline.hpp"
#include "divrate/sampling.hpp"

namespace {

using namespace divrate;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RateFunction rate_from_arg(const std::string& arg) {
  if (is_named_rate(arg)) return named_rate(arg);
  const GridFunction tab = read_grid_csv(arg);
  return [tab](double x) { return x > tab.x_max() ? tab[tab.size() - 1] : interp_eval(tab, x); };
}

void write_keyvalues(const std::string& path, const std::map<std::string, std::string>& kv) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
}

int cmd_solve(const std::string& g_arg, const std::string& B_arg, double kappa, double xmax,
              std::size_t nodes, const std::string& out_path) {
  const EigenPair pair = solve_eigenpair_adaptive(rate_from_arg(g_arg), rate_from_arg(B_arg),
                                                  kappa, xmax, nodes);
  write_csv(pair.N, out_path);
  write_keyvalues(out_path + ".meta", {{"lambda", fmt(pair.lambda)},
                                       {"kappa", fmt(kappa)},
                                       {"g", g_arg},
                                       {"B", B_arg},
                                       {"xmax", fmt(pair.N.x_max())}});
  std::cout << "lambda = " << pair.lambda << ", domain [0, " << pair.N.x_max() << "], "
            << pair.N.size() << " nodes -> " << out_path << "\n";
  return 0;
}

int cmd_sample(const std::string& pair_path, std::size_t n, std::uint64_t seed,
               const std::string& out_path) {
  const GridFunction N = read_grid_csv(pair_path);
  RejectionStats stats;
  const SizeSample sample = rejection_sample(N, n, seed, &stats);
  write_sample_csv(sample, out_path);
  std::cout << n << " draws (acceptance rate " << 1.0 / stats.proposals_per_accept() << ") -> "
            << out_path << "\n";
  return 0;
}

int cmd_estimate(const std::string& sample_path, const std::string& g_arg, double lambda, double T,
                 long k, const std::string& pair_path, double epsilon, double epsilon_tilde,
                 double c, const std::string& out_dir) {
  SizeSample sample = read_sample_csv(sample_path);
  const std::size_t n = sample.n();

  double x_max = T;
  for (double v : sample.values) x_max = std::max(x_max, v * 1.02);
  GridFunction truth_N;
  bool have_truth = false;
  if (!pair_path.empty()) {
    truth_N = read_grid_csv(pair_path);
    x_max = std::max(x_max, truth_N.x_max());
    have_truth = true;
  }

  const UniformGrid fine(0.0, x_max, 1001);
  const GridFunction g = GridFunction::tabulate(fine, rate_from_arg(g_arg));

  GLConfig cfg;
  cfg.epsilon = epsilon;
  cfg.epsilon_tilde = epsilon_tilde;
  cfg.c = c;

  pipeline::EstimationResult res =
      pipeline::estimate_H(sample, g, lambda, cfg, k > 0 ? static_cast<std::size_t>(k) : n, T);
  const Interval window(0.5 * T / 4.0, std::min(2.5 * T / 4.0, T));
  pipeline::estimate_B(res, n, window);

  std::filesystem::create_directories(out_dir);
  write_csv(res.N_hat, out_dir + "/N_hat.csv");
  write_csv(res.D_hat, out_dir + "/D_hat.csv");
  dilation::write_step_csv(res.H_hat, out_dir + "/H_hat.csv");
  write_csv(res.B_tilde, out_dir + "/B_tilde.csv");
  write_gl_csv(res.gl_density, out_dir + "/gl_density.csv");
  write_gl_csv(res.gl_derivative, out_dir + "/gl_derivative.csv");

  std::map<std::string, std::string> summary = {
      {"n", std::to_string(n)},
      {"h_hat", fmt(res.h_hat)},
      {"h_tilde", fmt(res.h_tilde)},
      {"rho_hat", fmt(res.rho_hat)},
      {"kappa_hat", fmt(res.kappa_hat)},
      {"lambda", fmt(lambda)},
  };

  if (have_truth) {
    const GridFunction N = GridFunction::tabulate(fine, [&](double x) { return interp_eval(truth_N, x); });
    std::vector<double> gn(fine.m);
    for (std::size_t j = 0; j < fine.m; ++j) gn[j] = g[j] * N[j];
    std::vector<double> d(fine.m);
    const double dx = fine.dx();
    for (std::size_t j = 1; j + 1 < fine.m; ++j) d[j] = (gn[j + 1] - gn[j - 1]) / (2.0 * dx);
    d[0] = (gn[1] - gn[0]) / dx;
    d[fine.m - 1] = (gn[fine.m - 1] - gn[fine.m - 2]) / dx;
    const GridFunction D(fine, d);
    summary["err_N"] = fmt(pipeline::relative_error(res.N_hat, N, fine.span()));
    summary["err_D"] = fmt(pipeline::relative_error(res.D_hat, D, fine.span()));
  }
  write_keyvalues(out_dir + "/summary.txt", summary);

  std::cout << "h_hat = " << res.h_hat << ", h_tilde = " << res.h_tilde
            << ", kappa_hat = " << res.kappa_hat << " -> " << out_dir << "\n";
  return 0;
}

int cmd_bench(const std::string& config_path) {
  const harness::ExperimentConfig cfg = harness::read_config(config_path);
  try {
    const harness::ExperimentReport report = harness::run_experiment(cfg);
    harness::emit_report(report, cfg.output_dir);
    std::cout << "lambda = " << report.lambda << ", domain [0, " << report.solver_x_max << "]\n";
    for (const auto& a : report.aggregates) {
      std::cout << "n = " << a.n << ": ";
      for (std::size_t c = 0; c < 7; ++c)
        std::cout << harness::kMetricNames[c] << " = " << a.mean[c] << (c + 1 < 7 ? ", " : "");
      std::cout << " (" << a.failures << " failures)\n";
    }
    std::cout << "report -> " << cfg.output_dir << "\n";
  } catch (const ExperimentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"division-rate estimation for size-structured populations"};
  app.require_subcommand(1);

  // solve
  std::string g_arg = "one", B_arg = "one", out_path = "pair.csv";
  double kappa = 1.0, xmax = 4.0;
  std::size_t nodes = 2001;
  auto* solve = app.add_subcommand("solve", "solve the direct eigenproblem");
  solve->add_option("--g", g_arg, "growth rate: one|linear|square|b2|b3 or a CSV file");
  solve->add_option("--B", B_arg, "division rate: one|linear|square|b2|b3 or a CSV file");
  solve->add_option("--kappa", kappa, "growth constant");
  solve->add_option("--xmax", xmax, "initial right end of the grid");
  solve->add_option("--nodes", nodes, "grid nodes");
  solve->add_option("--out", out_path, "output CSV (sidecar .meta holds lambda)");

  // sample
  std::string pair_path = "pair.csv", sample_out = "sample.csv";
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  auto* sample = app.add_subcommand("sample", "draw sizes from a solved density");
  sample->add_option("--pair", pair_path, "density CSV from solve");
  sample->add_option("--n", n, "number of draws");
  sample->add_option("--seed", seed, "RNG seed");
  sample->add_option("--out", sample_out, "output CSV");

  // estimate
  std::string est_sample = "sample.csv", est_g = "one", est_pair, est_out = "result";
  double est_lambda = 1.0, est_T = 4.0, eps = 0.1, eps_tilde = 0.1, ridge = 0.0;
  long est_k = -1;
  auto* estimate = app.add_subcommand("estimate", "run the estimation chain on a sample");
  estimate->add_option("--sample", est_sample, "sample CSV");
  estimate->add_option("--g", est_g, "growth rate model or CSV file");
  estimate->add_option("--lambda", est_lambda, "Malthus exponent to use");
  estimate->add_option("--T", est_T, "inversion interval right end");
  estimate->add_option("--k", est_k, "inversion cells (-1: use n)");
  estimate->add_option("--pair", est_pair, "optional truth density CSV for error reporting");
  estimate->add_option("--epsilon", eps, "density selection tuning constant");
  estimate->add_option("--epsilon-tilde", eps_tilde, "derivative selection tuning constant");
  estimate->add_option("--c", ridge, "ridge constant of the moment ratio");
  estimate->add_option("--out", est_out, "output directory");

  // bench
  std::string config_path = "exp.cfg";
  auto* bench = app.add_subcommand("bench", "run a replication study");
  bench->add_option("--config", config_path, "config file (key = value lines)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(g_arg, B_arg, kappa, xmax, nodes, out_path);
    if (sample->parsed()) return cmd_sample(pair_path, n, seed, sample_out);
    if (estimate->parsed())
      return cmd_estimate(est_sample, est_g, est_lambda, est_T, est_k, est_pair, eps, eps_tilde,
                          ridge, est_out);
    if (bench->parsed()) return cmd_bench(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
