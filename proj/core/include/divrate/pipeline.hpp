#pragma once

#include <map>
#include <string>

#include "divrate/bandwidth.hpp"
#include "divrate/dilation.hpp"
#include "divrate/grid.hpp"
#include "divrate/kernels.hpp"

namespace divrate::pipeline {

/// Everything one estimation run produces: selected bandwidths, the moment
/// ratio and kappa, the four reconstructed curves, and diagnostics.
struct EstimationResult {
  double h_hat = 0.0;       // density bandwidth
  double h_tilde = 0.0;     // derivative bandwidth
  double rho_hat = 0.0;
  double kappa_hat = 0.0;
  double lambda_used = 0.0;
  GridFunction N_hat;
  GridFunction D_hat;
  dilation::StepFunction H_hat;
  GridFunction B_tilde;
  GLSelection gl_density;
  GLSelection gl_derivative;
  std::map<std::string, double> diagnostics;
};

/// Moment-ratio estimate sum X_i / (sum g(X_i) + c). Throws
/// DegenerateDenominatorError when the denominator vanishes.
double estimate_rho(const SizeSample& sample, const GridFunction& g, double c);

double estimate_kappa(double lambda_hat, double rho_hat);

/// The full chain through the numerator of the rate: select both bandwidths,
/// form phi = kappa_hat * D_hat + lambda_hat * N_hat on the fine grid, and
/// invert the dilation operator on the k-cell partition of [0, T].
/// B_tilde is left empty (zero) until estimate_B runs.
EstimationResult estimate_H(const SizeSample& sample, const GridFunction& g, double lambda_hat,
                            const GLConfig& cfg, std::size_t k, double T);

/// Clipped quotient max(min(H_hat / N_hat, sqrt n), -sqrt n) on the fine
/// grid, with 0/0 read as 0. The window only feeds the clip-fraction
/// diagnostic; clipping itself is applied everywhere.
GridFunction estimate_B(EstimationResult& result, std::size_t n, const Interval& window);

/// ||est - truth||_2 / ||truth||_2 on the window.
double relative_error(const GridFunction& est, const GridFunction& truth, const Interval& window);

/// Step-function estimates are sampled onto the truth's grid (each node takes
/// the height of its cell) before comparing.
double relative_error(const dilation::StepFunction& est, const GridFunction& truth,
                      const Interval& window);

/// Step function sampled on a grid: node value = height of the containing cell.
GridFunction step_on_grid(const dilation::StepFunction& step, const UniformGrid& grid);

}  // namespace divrate::pipeline
