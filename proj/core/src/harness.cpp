#include "divrate/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "divrate/models.hpp"
#include "divrate/rng.hpp"
#include "divrate/sampling.hpp"

namespace divrate::harness {

std::array<double, 7> metrics(const ReplicationRow& r) {
  return {r.err_N, r.err_D, r.err_H, r.err_B, r.h_hat, r.h_tilde, r.kappa_hat};
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t n, std::size_t rep) {
  return seed_combine(seed_combine(master_seed, n), rep);
}

std::size_t worker_count() {
  if (const char* env = std::getenv("DIVRATE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<ReplicationRow>& rows) {
  std::vector<AggregateRow> out;
  std::vector<std::size_t> ns;
  for (const auto& r : rows)
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);

  for (std::size_t n : ns) {
    AggregateRow agg;
    agg.n = n;
    agg.n_pow = std::pow(static_cast<double>(n), -0.2);
    std::vector<std::array<double, 7>> ok;
    for (const auto& r : rows) {
      if (r.n != n) continue;
      ++agg.replications;
      if (r.failed) {
        ++agg.failures;
        continue;
      }
      ok.push_back(metrics(r));
    }
    const double cnt = static_cast<double>(ok.size());
    for (std::size_t c = 0; c < 7; ++c) {
      double mean = 0.0;
      for (const auto& m : ok) mean += m[c];
      mean = cnt > 0 ? mean / cnt : 0.0;
      double var = 0.0;
      for (const auto& m : ok) var += (m[c] - mean) * (m[c] - mean);
      var = cnt > 1 ? var / (cnt - 1.0) : 0.0;
      agg.mean[c] = mean;
      agg.variance[c] = var;
    }
    out.push_back(std::move(agg));
  }
  return out;
}

namespace {

struct Truth {
  UniformGrid fine;
  GridFunction N, D, H, B, g;
};

// The evaluation grid stays on the configured model domain even when the
// eigensolver had to enlarge its own domain to resolve the density tail; the
// estimators and all norms live on [0, x_max] as the truth curves do.
Truth make_truth(const EigenPair& pair, const RateFunction& g_fn, const RateFunction& B_fn,
                 double x_max, std::size_t fine_nodes) {
  Truth t;
  t.fine = UniformGrid(0.0, x_max, fine_nodes);
  t.N = GridFunction::tabulate(t.fine, [&](double x) { return interp_eval(pair.N, x); });
  t.g = GridFunction::tabulate(t.fine, g_fn);
  t.B = GridFunction::tabulate(t.fine, B_fn);

  std::vector<double> gn(t.fine.m), h(t.fine.m);
  for (std::size_t j = 0; j < t.fine.m; ++j) {
    gn[j] = t.g[j] * t.N[j];
    h[j] = t.B[j] * t.N[j];
  }
  t.H = GridFunction(t.fine, h);

  // Central differences for the derivative truth, one-sided at the ends.
  const double dx = t.fine.dx();
  std::vector<double> d(t.fine.m);
  for (std::size_t j = 1; j + 1 < t.fine.m; ++j) d[j] = (gn[j + 1] - gn[j - 1]) / (2.0 * dx);
  d[0] = (gn[1] - gn[0]) / dx;
  d[t.fine.m - 1] = (gn[t.fine.m - 1] - gn[t.fine.m - 2]) / dx;
  t.D = GridFunction(t.fine, std::move(d));
  return t;
}

ReplicationRow run_one(const ExperimentConfig& cfg, const EigenPair& pair, const Truth& truth,
                       std::size_t n, std::size_t rep) {
  ReplicationRow row;
  row.n = n;
  row.rep = rep;
  row.seed = replication_seed(cfg.master_seed, n, rep);
  try {
    const SizeSample sample = rejection_sample(pair.N, n, row.seed);
    const std::size_t k = cfg.k > 0 ? static_cast<std::size_t>(cfg.k) : n;
    pipeline::EstimationResult res =
        pipeline::estimate_H(sample, truth.g, pair.lambda, cfg.gl, k, cfg.T);
    pipeline::estimate_B(res, n, cfg.error_window);

    const Interval full = truth.fine.span();
    row.err_N = pipeline::relative_error(res.N_hat, truth.N, full);
    row.err_D = pipeline::relative_error(res.D_hat, truth.D, full);
    row.err_H = pipeline::relative_error(res.H_hat, truth.H, Interval(0.0, cfg.T));
    row.err_B = pipeline::relative_error(res.B_tilde, truth.B, cfg.error_window);
    row.h_hat = res.h_hat;
    row.h_tilde = res.h_tilde;
    row.kappa_hat = res.kappa_hat;
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
    row.err_N = row.err_D = row.err_H = row.err_B = std::nan("");
    row.h_hat = row.h_tilde = row.kappa_hat = std::nan("");
  }
  return row;
}

PlotData make_plot(const ExperimentConfig& cfg, const EigenPair& pair, const Truth& truth,
                   std::size_t n) {
  const std::uint64_t seed = replication_seed(cfg.master_seed, n, 0);
  const SizeSample sample = rejection_sample(pair.N, n, seed);
  const std::size_t k = cfg.k > 0 ? static_cast<std::size_t>(cfg.k) : n;
  pipeline::EstimationResult res =
      pipeline::estimate_H(sample, truth.g, pair.lambda, cfg.gl, k, cfg.T);
  pipeline::estimate_B(res, n, cfg.error_window);

  PlotData p;
  p.n = n;
  p.truth_N = truth.N;
  p.est_N = res.N_hat;
  p.truth_D = truth.D;
  p.est_D = res.D_hat;
  p.truth_H = truth.H;
  p.est_H = pipeline::step_on_grid(res.H_hat, truth.fine);
  p.truth_B = truth.B;
  p.est_B = res.B_tilde;
  return p;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.n_values.empty()) throw ArgumentError("run_experiment: n_values must be nonempty");
  if (cfg.replications < 1) throw ArgumentError("run_experiment: replications must be >= 1");

  const RateFunction g_fn = named_rate(cfg.g_name);
  const RateFunction B_fn = named_rate(cfg.B_name);
  const EigenPair pair =
      solve_eigenpair_adaptive(g_fn, B_fn, cfg.kappa, cfg.x_max, cfg.solver_nodes);
  const Truth truth =
      make_truth(pair, g_fn, B_fn, std::max(cfg.x_max, cfg.T), cfg.fine_nodes);

  ExperimentReport report;
  report.config = cfg;
  report.lambda = pair.lambda;
  report.solver_x_max = pair.N.x_max();

  struct Task {
    std::size_t n, rep;
  };
  std::vector<Task> tasks;
  for (std::size_t n : cfg.n_values)
    for (std::size_t r = 0; r < cfg.replications; ++r) tasks.push_back({n, r});
  report.rows.resize(tasks.size());

  const std::size_t workers = std::min(worker_count(), tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      report.rows[i] = run_one(cfg, pair, truth, tasks[i].n, tasks[i].rep);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  report.aggregates = aggregate_rows(report.rows);

  std::size_t failures = 0;
  for (const auto& r : report.rows) failures += r.failed ? 1 : 0;
  if (10 * failures > report.rows.size())
    throw ExperimentError("run_experiment: more than 10% of replications failed (" +
                          std::to_string(failures) + "/" + std::to_string(report.rows.size()) +
                          ")");

  for (std::size_t n : cfg.n_values) report.plots.push_back(make_plot(cfg, pair, truth, n));
  return report;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_plot_csv(const GridFunction& truth, const GridFunction& est, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "x,truth,estimate\n";
  for (std::size_t j = 0; j < truth.size(); ++j)
    out << fmt(truth.node(j)) << ',' << fmt(truth[j]) << ',' << fmt(est[j]) << '\n';
}

}  // namespace

void emit_report(const ExperimentReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir + " (" + ec.message() + ")");

  {
    std::ofstream out(dir + "/rows.csv");
    if (!out) throw IoError("cannot open for writing: " + dir + "/rows.csv");
    out << "n,rep,seed,err_N,err_D,err_H,err_B,h_hat,h_tilde,kappa_hat\n";
    for (const auto& r : report.rows) {
      out << r.n << ',' << r.rep << ',' << r.seed;
      for (double v : metrics(r)) out << ',' << fmt(v);
      out << '\n';
    }
    if (!out) throw IoError("write failed: " + dir + "/rows.csv");
  }

  {
    std::ofstream out(dir + "/aggregates.csv");
    if (!out) throw IoError("cannot open for writing: " + dir + "/aggregates.csv");
    out << "n,replications,failures";
    for (const char* name : kMetricNames) out << ",mean_" << name << ",var_" << name;
    out << ",n_pow\n";
    for (const auto& a : report.aggregates) {
      out << a.n << ',' << a.replications << ',' << a.failures;
      for (std::size_t c = 0; c < 7; ++c) out << ',' << fmt(a.mean[c]) << ',' << fmt(a.variance[c]);
      out << ',' << fmt(a.n_pow) << '\n';
    }
  }

  for (const auto& p : report.plots) {
    const std::string suffix = "_" + std::to_string(p.n) + ".csv";
    write_plot_csv(p.truth_N, p.est_N, dir + "/plot_N" + suffix);
    write_plot_csv(p.truth_D, p.est_D, dir + "/plot_D" + suffix);
    write_plot_csv(p.truth_H, p.est_H, dir + "/plot_H" + suffix);
    write_plot_csv(p.truth_B, p.est_B, dir + "/plot_B" + suffix);
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

}  // namespace

ExperimentConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  ExperimentConfig cfg;
  cfg.n_values.clear();

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ArgumentError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "g") cfg.g_name = val;
    else if (key == "B") cfg.B_name = val;
    else if (key == "kappa") cfg.kappa = std::stod(val);
    else if (key == "n") {
      for (const auto& p : split_list(val)) cfg.n_values.push_back(std::stoul(p));
    } else if (key == "replications") cfg.replications = std::stoul(val);
    else if (key == "master_seed") cfg.master_seed = std::stoull(val);
    else if (key == "epsilon") cfg.gl.epsilon = std::stod(val);
    else if (key == "epsilon_tilde") cfg.gl.epsilon_tilde = std::stod(val);
    else if (key == "g_sup") cfg.gl.g_sup = std::stod(val);
    else if (key == "c") cfg.gl.c = std::stod(val);
    else if (key == "k") cfg.k = val == "n" ? -1 : std::stol(val);
    else if (key == "T") cfg.T = std::stod(val);
    else if (key == "error_window") {
      const auto parts = split_list(val);
      if (parts.size() != 2)
        throw ArgumentError(path + ":" + std::to_string(lineno) + ": error_window needs two values");
      cfg.error_window = Interval(std::stod(parts[0]), std::stod(parts[1]));
    } else if (key == "output_dir") cfg.output_dir = val;
    else if (key == "xmax") cfg.x_max = std::stod(val);
    else if (key == "nodes") cfg.solver_nodes = std::stoul(val);
    else if (key == "fine_nodes") cfg.fine_nodes = std::stoul(val);
    else throw ArgumentError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (cfg.n_values.empty()) throw ArgumentError(path + ": config must set n");
  return cfg;
}

void write_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "g = " << cfg.g_name << "\nB = " << cfg.B_name << "\nkappa = " << fmt(cfg.kappa) << "\nn = ";
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i)
    out << (i ? ", " : "") << cfg.n_values[i];
  out << "\nreplications = " << cfg.replications << "\nmaster_seed = " << cfg.master_seed
      << "\nepsilon = " << fmt(cfg.gl.epsilon) << "\nepsilon_tilde = " << fmt(cfg.gl.epsilon_tilde)
      << "\nc = " << fmt(cfg.gl.c) << "\nk = ";
  if (cfg.k > 0)
    out << cfg.k;
  else
    out << "n";
  out << "\nT = " << fmt(cfg.T) << "\nerror_window = " << fmt(cfg.error_window.a) << ", "
      << fmt(cfg.error_window.b) << "\noutput_dir = " << cfg.output_dir
      << "\nxmax = " << fmt(cfg.x_max) << "\nnodes = " << cfg.solver_nodes
      << "\nfine_nodes = " << cfg.fine_nodes << "\n";
}

}  // namespace divrate::harness
