#pragma once

#include <cstdint>

#include "divrate/grid.hpp"
#include "divrate/kernels.hpp"

namespace divrate {

/// Bookkeeping of one sampling run.
struct RejectionStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;

  double proposals_per_accept() const {
    return accepts == 0 ? 0.0 : static_cast<double>(proposals) / static_cast<double>(accepts);
  }
};

/// Draw n i.i.d. sizes from the piecewise-linear density proportional to the
/// tabulation of N, by rejection against the uniform envelope on
/// [x_min, x_max] with height bound 1.0001 * max nodal value. Draw i consumes
/// its own counter-based RNG substream derived from (seed, i), so the output
/// is bitwise reproducible and independent of any execution order.
SizeSample rejection_sample(const GridFunction& N, std::size_t n, std::uint64_t seed,
                            RejectionStats* stats = nullptr);

/// sup over the sample points of |empirical CDF - CDF of N|, with the CDF of
/// N computed by exact integration of the interpolated tabulation.
double ks_distance(const SizeSample& sample, const GridFunction& N);

/// CDF of the (normalized) tabulated density at x; exact for the piecewise
/// linear interpolant. Monotone from 0 to 1 across the grid.
double tabulated_cdf(const GridFunction& N, double x);

/// Inverse of tabulated_cdf by bisection; u in [0, 1].
double tabulated_quantile(const GridFunction& N, double u);

/// Single-column CSV with header "x".
void write_sample_csv(const SizeSample& sample, const std::string& path);
SizeSample read_sample_csv(const std::string& path);

}  // namespace divrate
