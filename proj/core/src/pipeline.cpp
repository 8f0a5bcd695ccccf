#include "divrate/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace divrate::pipeline {

double estimate_rho(const SizeSample& sample, const GridFunction& g, double c) {
  if (sample.values.empty()) throw ArgumentError("estimate_rho: empty sample");
  if (c < 0.0) throw ArgumentError("estimate_rho: c must be >= 0");
  double num = 0.0, den = c;
  for (double x : sample.values) {
    num += x;
    den += interp_eval(g, x);
  }
  if (den == 0.0) throw DegenerateDenominatorError("estimate_rho: sum g(X_i) + c vanishes");
  return num / den;
}

double estimate_kappa(double lambda_hat, double rho_hat) { return lambda_hat * rho_hat; }

EstimationResult estimate_H(const SizeSample& raw_sample, const GridFunction& g,
                            double lambda_hat, const GLConfig& cfg, std::size_t k, double T) {
  const UniformGrid& fine = g.grid();
  if (T > fine.x_max + 1e-12 * (1.0 + std::fabs(fine.x_max)))
    throw ArgumentError("estimate_H: T extends beyond the evaluation grid");
  const KernelSpec kernel = KernelSpec::gaussian();
  const std::size_t n = raw_sample.n();

  SizeSample sample = raw_sample;
  std::sort(sample.values.begin(), sample.values.end());

  EstimationResult r;
  r.lambda_used = lambda_hat;
  r.gl_density = gl_criterion_density(sample, build_bandwidth_grid(n, BandwidthKind::density),
                                      cfg, kernel, fine);
  r.h_hat = r.gl_density.h_selected();
  r.N_hat = estimate_density(sample, r.h_hat, fine);

  r.gl_derivative = gl_criterion_derivative(
      sample, g, build_bandwidth_grid(n, BandwidthKind::derivative), cfg, kernel, fine);
  r.h_tilde = r.gl_derivative.h_selected();
  r.D_hat = estimate_derivative(sample, g, r.h_tilde, fine);

  r.rho_hat = estimate_rho(sample, g, cfg.c);
  r.kappa_hat = estimate_kappa(lambda_hat, r.rho_hat);

  std::vector<double> phi(fine.m);
  for (std::size_t j = 0; j < fine.m; ++j)
    phi[j] = r.kappa_hat * r.D_hat[j] + lambda_hat * r.N_hat[j];
  const GridFunction numerator(fine, std::move(phi));
  r.H_hat = dilation::invert(dilation::cell_averages(numerator, T, k));

  r.diagnostics["gl_density_extremal"] = r.gl_density.extremal ? 1.0 : 0.0;
  r.diagnostics["gl_derivative_extremal"] = r.gl_derivative.extremal ? 1.0 : 0.0;
  r.diagnostics["phi_min"] = numerator.min_value();
  return r;
}

GridFunction estimate_B(EstimationResult& result, std::size_t n, const Interval& window) {
  const GridFunction& N = result.N_hat;
  const double bound = std::sqrt(static_cast<double>(n));
  std::vector<double> b(N.size());
  std::size_t clipped_in_window = 0, in_window = 0;
  for (std::size_t j = 0; j < N.size(); ++j) {
    const double x = N.node(j);
    const double h = result.H_hat(x);
    const double den = N[j];
    double v;
    if (den == 0.0) {
      v = h == 0.0 ? 0.0 : (h > 0.0 ? bound : -bound);
    } else {
      v = h / den;
      if (v > bound) v = bound;
      if (v < -bound) v = -bound;
    }
    b[j] = v;
    if (window.contains(x)) {
      ++in_window;
      if (std::fabs(v) == bound) ++clipped_in_window;
    }
  }
  result.B_tilde = N.with_values(std::move(b));
  result.diagnostics["clip_fraction_window"] =
      in_window == 0 ? 0.0 : static_cast<double>(clipped_in_window) / static_cast<double>(in_window);
  return result.B_tilde;
}

double relative_error(const GridFunction& est, const GridFunction& truth, const Interval& window) {
  const double denom = l2_norm(truth, window);
  if (denom == 0.0) throw ArgumentError("relative_error: truth vanishes on the window");
  return l2_distance(est, truth, window) / denom;
}

double relative_error(const dilation::StepFunction& est, const GridFunction& truth,
                      const Interval& window) {
  return relative_error(step_on_grid(est, truth.grid()), truth, window);
}

GridFunction step_on_grid(const dilation::StepFunction& step, const UniformGrid& grid) {
  std::vector<double> v(grid.m);
  for (std::size_t j = 0; j < grid.m; ++j) v[j] = step(grid.node(j));
  return GridFunction(grid, std::move(v));
}

}  // namespace divrate::pipeline
