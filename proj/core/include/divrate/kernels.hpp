#pragma once

#include <cstdint>
#include <vector>

#include "divrate/grid.hpp"

namespace divrate {

/// n i.i.d. sizes drawn from a density, with the seed kept for provenance.
struct SizeSample {
  std::vector<double> values;
  std::uint64_t seed = 0;

  std::size_t n() const { return values.size(); }
};

/// Kernel family with its norms. Only the Gaussian kernel is built in; the
/// enumeration is the extension point for higher-order kernels.
struct KernelSpec {
  enum class Family { gaussian };

  Family family = Family::gaussian;
  double norm_1 = 1.0;    // ||K||_1
  double norm_2 = 0.0;    // ||K||_2
  double dnorm_1 = 0.0;   // ||K'||_1
  double dnorm_2 = 0.0;   // ||K'||_2

  static KernelSpec gaussian();
};

/// Kernel density estimate with bandwidth h, tabulated on the template grid:
///   (1/n) sum_i K_h(x - X_i),  K_h(x) = K(x/h)/h.
GridFunction estimate_density(const SizeSample& sample, double h, const UniformGrid& grid);

/// Two-bandwidth estimate; for Gaussian kernels K_h * K_h' is the Gaussian
/// kernel of bandwidth sqrt(h^2 + h'^2).
GridFunction estimate_density_pair(const SizeSample& sample, double h, double h_prime,
                                   const UniformGrid& grid);

/// Kernel estimate of the derivative of (g times the density):
///   (1/(n h^2)) sum_i g(X_i) K'((x - X_i)/h),
/// with g read off its tabulation by interpolation.
GridFunction estimate_derivative(const SizeSample& sample, const GridFunction& g, double h,
                                 const UniformGrid& grid);

GridFunction estimate_derivative_pair(const SizeSample& sample, const GridFunction& g, double h,
                                      double h_prime, const UniformGrid& grid);

/// Reference implementations: plain double loop over samples and nodes with
/// one exp per term. The default paths above must agree with these to 1e-10
/// in sup norm; tests enforce it.
GridFunction estimate_density_naive(const SizeSample& sample, double h, const UniformGrid& grid);
GridFunction estimate_derivative_naive(const SizeSample& sample, const GridFunction& g, double h,
                                       const UniformGrid& grid);

}  // namespace divrate
