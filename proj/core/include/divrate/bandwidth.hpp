#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "divrate/grid.hpp"
#include "divrate/kernels.hpp"

namespace divrate {

/// Finite set of candidate bandwidths, strictly decreasing, all in (0, 1].
struct BandwidthGrid {
  std::vector<double> values;

  explicit BandwidthGrid(std::vector<double> values_);

  std::size_t size() const { return values.size(); }
  double largest() const { return values.front(); }
  double smallest() const { return values.back(); }
};

enum class BandwidthKind { density, derivative };

/// Logarithmic sampling 1, 1/2, ..., 1/9, 1/10, 1/20, ..., down to 1/D_max,
/// where D_max is n for density estimation and floor(sqrt(n)) for derivative
/// estimation. D_max itself is always included as the final denominator.
BandwidthGrid build_bandwidth_grid(std::size_t n, BandwidthKind kind);

/// Tuning constants of the selection criteria. epsilon enters the penalty
/// factor chi = (1 + epsilon)(1 + ||K||_1); g_sup is the operative sup of the
/// growth rate over the evaluation window (<= 0 means: take max of the
/// tabulated g); c is the ridge constant of the moment-ratio estimate.
struct GLConfig {
  double epsilon = 0.1;
  double epsilon_tilde = 0.1;
  double g_sup = -1.0;
  double c = 0.0;
};

/// Outcome of one selection run, including the per-bandwidth diagnostics the
/// CSV emitter writes.
struct GLSelection {
  std::vector<double> h;        // candidate bandwidths, decreasing
  std::vector<double> A;        // bias proxy per candidate
  std::vector<double> penalty;  // variance penalty per candidate
  std::size_t selected = 0;     // index into h
  bool extremal = false;        // selected candidate sits on the grid boundary

  double h_selected() const { return h[selected]; }
  double criterion(std::size_t i) const { return A[i] + penalty[i]; }
};

/// Bandwidth selection for the density estimate: minimize
///   A(h) + chi ||K||_2 / sqrt(n h)
/// with A(h) the positive-part sup of pair-estimate distances. Ties break
/// toward the larger bandwidth. Norms are taken on the supplied grid.
GLSelection gl_criterion_density(const SizeSample& sample, const BandwidthGrid& H,
                                 const GLConfig& cfg, const KernelSpec& kernel,
                                 const UniformGrid& grid);

/// Same scheme for the derivative estimate, with penalty
///   chi~ ||g||_inf ||K'||_2 / sqrt(n h^3).
GLSelection gl_criterion_derivative(const SizeSample& sample, const GridFunction& g,
                                    const BandwidthGrid& H, const GLConfig& cfg,
                                    const KernelSpec& kernel, const UniformGrid& grid);

/// Diagnostics CSV: columns h,A,penalty,criterion,selected.
void write_gl_csv(const GLSelection& sel, const std::string& path);

}  // namespace divrate
