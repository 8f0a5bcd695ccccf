#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "divrate/bandwidth.hpp"
#include "divrate/eigensolve.hpp"
#include "divrate/grid.hpp"
#include "divrate/pipeline.hpp"

namespace divrate::harness {

/// One replication study: a model, the sample sizes to sweep, and the knobs
/// of the estimation chain.
struct ExperimentConfig {
  std::string g_name = "one";
  std::string B_name = "one";
  double kappa = 1.0;
  std::vector<std::size_t> n_values;
  std::size_t replications = 1;
  std::uint64_t master_seed = 1;
  GLConfig gl;
  long k = -1;  // cells of the inversion partition; -1 means k = n
  double T = 4.0;
  Interval error_window{0.5, 2.5};
  std::string output_dir = "out";
  double x_max = 4.0;           // initial eigensolver domain
  std::size_t solver_nodes = 2001;
  std::size_t fine_nodes = 1001;
};

struct ReplicationRow {
  std::size_t n = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double err_N = 0.0, err_D = 0.0, err_H = 0.0, err_B = 0.0;
  double h_hat = 0.0, h_tilde = 0.0, kappa_hat = 0.0;
  bool failed = false;
  std::string error;
};

inline constexpr std::array<const char*, 7> kMetricNames = {
    "err_N", "err_D", "err_H", "err_B", "h_hat", "h_tilde", "kappa_hat"};

std::array<double, 7> metrics(const ReplicationRow& row);

/// Per-n summary; variance is the unbiased one (divisor R - 1).
struct AggregateRow {
  std::size_t n = 0;
  std::size_t replications = 0;
  std::size_t failures = 0;
  std::array<double, 7> mean{};
  std::array<double, 7> variance{};
  double n_pow = 0.0;  // n^{-1/5}
};

/// Truth curves and the estimates of one replication, for plot-data CSVs.
struct PlotData {
  std::size_t n = 0;
  GridFunction truth_N, est_N;
  GridFunction truth_D, est_D;
  GridFunction truth_H, est_H;
  GridFunction truth_B, est_B;
};

struct ExperimentReport {
  ExperimentConfig config;
  double lambda = 0.0;
  double solver_x_max = 0.0;
  std::vector<ReplicationRow> rows;        // ordered by (n, rep)
  std::vector<AggregateRow> aggregates;    // one per n
  std::vector<PlotData> plots;             // first replication of each n
};

/// Run the full study: solve the eigenpair once, then one task per (n, rep)
/// with seed derived from (master_seed, n, rep). Tasks run on a worker pool
/// capped by DIVRATE_THREADS; the output is identical for any worker count.
/// Throws ExperimentError when more than 10% of replications fail.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Recompute the per-n aggregates from rows (pure; exposed for verification).
std::vector<AggregateRow> aggregate_rows(const std::vector<ReplicationRow>& rows);

/// Worker cap from the DIVRATE_THREADS environment variable (0 = auto).
std::size_t worker_count();

/// rows.csv, aggregates.csv and plot_{N,D,H,B}_<n>.csv under dir.
void emit_report(const ExperimentReport& report, const std::string& dir);

/// Flat "key = value" config file; '#' starts a comment. Unknown keys are
/// rejected.
ExperimentConfig read_config(const std::string& path);
void write_config(const ExperimentConfig& cfg, const std::string& path);

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t n, std::size_t rep);

}  // namespace divrate::harness
