#include "divrate/kernels.hpp"

#include <cmath>

namespace divrate {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // (2*pi)^{-1/2}

// Gaussian tail beyond 9 standard deviations is ~1e-18 of the peak; cutting
// there keeps the truncated sums within 1e-12 of the untruncated ones for
// every bandwidth the selection grids can produce.
constexpr double kCutoffSigmas = 9.0;

void check_args(const SizeSample& sample, double h) {
  if (sample.values.empty()) throw ArgumentError("kernel estimate: empty sample");
  if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("kernel estimate: bandwidth must be > 0");
}

// Node range [jlo, jhi] covered by the truncated kernel around [x_lo, x_hi];
// false when it misses the grid.
bool node_range(const UniformGrid& grid, double x_lo, double x_hi, double radius,
                std::size_t& jlo, std::size_t& jhi) {
  const double m1 = static_cast<double>(grid.m - 1);
  double lo = std::ceil((x_lo - radius - grid.x_min) / grid.dx());
  double hi = std::floor((x_hi + radius - grid.x_min) / grid.dx());
  if (lo < 0.0) lo = 0.0;
  if (hi > m1) hi = m1;
  if (hi < lo) return false;
  jlo = static_cast<std::size_t>(lo);
  jhi = static_cast<std::size_t>(hi);
  return true;
}

// Length of a recursion segment between fresh anchors. The drift per step
// scales with |a| d, so short steps (small d) tolerate long anchors; where
// per-node values can be large (d near the direct-evaluation threshold) the
// anchors shrink to keep the absolute error under ~1e-11.
std::size_t anchor_length(double d) {
  const double t = 1.6 / d;
  if (t <= 8.0) return 8;
  if (t >= 256.0) return 256;
  return static_cast<std::size_t>(t);
}

// One recursion chain for sample xi over [jlo, jhi].
template <bool Derivative>
void chain1(double xi, double wi, double s, double d, double w, std::size_t anchor,
            std::size_t jlo, std::size_t jhi, const UniformGrid& grid, double* acc) {
  const double inv_s = 1.0 / s;
  double e = 0.0, v = 0.0;
  std::size_t j = jlo;
  double* out = acc + jlo;
  while (j <= jhi) {
    const std::size_t stop = std::min(j + anchor - 1, jhi);
    const double a0 = (grid.node(j) - xi) * inv_s;
    e = std::exp(-0.5 * a0 * a0);
    v = std::exp(-a0 * d - 0.5 * d * d);
    for (; j <= stop; ++j) {
      if (Derivative)
        *out++ += wi * ((xi - grid.node(j)) * inv_s) * e;
      else
        *out++ += e;
      e *= v;
      v *= w;
    }
  }
}

// Four chains side by side over a shared node range; with samples sorted the
// union range is barely wider than each individual support, and the four
// independent recursions hide the multiply latency of a single chain.
template <bool Derivative>
void chain4(const double* xs, const double* ws, double s, double d, double w, std::size_t anchor,
            std::size_t jlo, std::size_t jhi, const UniformGrid& grid, double* acc) {
  const double inv_s = 1.0 / s;
  const double x0 = xs[0], x1 = xs[1], x2 = xs[2], x3 = xs[3];
  const double w0 = ws ? ws[0] : 1.0, w1 = ws ? ws[1] : 1.0;
  const double w2 = ws ? ws[2] : 1.0, w3 = ws ? ws[3] : 1.0;
  double e0 = 0, e1 = 0, e2 = 0, e3 = 0, v0 = 0, v1 = 0, v2 = 0, v3 = 0;
  std::size_t j = jlo;
  double* out = acc + jlo;
  while (j <= jhi) {
    const std::size_t stop = std::min(j + anchor - 1, jhi);
    {
      const double xj = grid.node(j);
      const double a0 = (xj - x0) * inv_s, a1 = (xj - x1) * inv_s;
      const double a2 = (xj - x2) * inv_s, a3 = (xj - x3) * inv_s;
      e0 = std::exp(-0.5 * a0 * a0);
      e1 = std::exp(-0.5 * a1 * a1);
      e2 = std::exp(-0.5 * a2 * a2);
      e3 = std::exp(-0.5 * a3 * a3);
      v0 = std::exp(-a0 * d - 0.5 * d * d);
      v1 = std::exp(-a1 * d - 0.5 * d * d);
      v2 = std::exp(-a2 * d - 0.5 * d * d);
      v3 = std::exp(-a3 * d - 0.5 * d * d);
    }
    for (; j <= stop; ++j) {
      if (Derivative) {
        const double xj = grid.node(j);
        *out++ += w0 * ((x0 - xj) * inv_s) * e0 + w1 * ((x1 - xj) * inv_s) * e1 +
                  w2 * ((x2 - xj) * inv_s) * e2 + w3 * ((x3 - xj) * inv_s) * e3;
      } else {
        *out++ += (e0 + e1) + (e2 + e3);
      }
      e0 *= v0;
      v0 *= w;
      e1 *= v1;
      v1 *= w;
      e2 *= v2;
      v2 *= w;
      e3 *= v3;
      v3 *= w;
    }
  }
}

// Scatter the Gaussian (or its derivative) around each sample point onto the
// grid. Correct for any sample order; sorted samples make the grouped path
// tight.
template <bool Derivative>
std::vector<double> scatter(const std::vector<double>& xs, const double* weights, double s,
                            const UniformGrid& grid) {
  const std::size_t m = grid.m;
  const double dx = grid.dx();
  const double radius = kCutoffSigmas * s;
  const double d = dx / s;
  std::vector<double> acc(m, 0.0);

  if (d > 0.3) {
    // Narrow support: evaluate exp directly, with the same expression as the
    // naive path. The recursion is unsafe here because its exponent
    // increments carry |a d| ~ 40 and amplify rounding by that factor.
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double xi = xs[i];
      const double wi = weights ? weights[i] : 1.0;
      std::size_t jlo, jhi;
      if (!node_range(grid, xi, xi, radius, jlo, jhi)) continue;
      double* out = acc.data() + jlo;
      for (std::size_t j = jlo; j <= jhi; ++j) {
        const double a = (grid.node(j) - xi) / s;
        const double e = std::exp(-0.5 * a * a);
        if (Derivative)
          *out++ += wi * (-a) * e;
        else
          *out++ += e;
      }
    }
    return acc;
  }

  const double w = std::exp(-d * d);
  const std::size_t anchor = anchor_length(d);
  std::size_t i = 0;
  for (; i + 4 <= xs.size(); i += 4) {
    const double x_lo = std::min(std::min(xs[i], xs[i + 1]), std::min(xs[i + 2], xs[i + 3]));
    const double x_hi = std::max(std::max(xs[i], xs[i + 1]), std::max(xs[i + 2], xs[i + 3]));
    std::size_t jlo, jhi;
    if (!node_range(grid, x_lo, x_hi, radius, jlo, jhi)) continue;
    chain4<Derivative>(xs.data() + i, weights ? weights + i : nullptr, s, d, w, anchor, jlo, jhi,
                       grid, acc.data());
  }
  for (; i < xs.size(); ++i) {
    std::size_t jlo, jhi;
    if (!node_range(grid, xs[i], xs[i], radius, jlo, jhi)) continue;
    chain1<Derivative>(xs[i], weights ? weights[i] : 1.0, s, d, w, anchor, jlo, jhi, grid,
                       acc.data());
  }
  return acc;
}

GridFunction finish(std::vector<double> acc, double scale, const UniformGrid& grid) {
  for (double& v : acc) v *= scale;
  return GridFunction(grid, std::move(acc));
}

std::vector<double> g_at_samples(const SizeSample& sample, const GridFunction& g) {
  std::vector<double> w(sample.n());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = interp_eval(g, sample.values[i]);
  return w;
}

}  // namespace

KernelSpec KernelSpec::gaussian() {
  KernelSpec k;
  k.family = Family::gaussian;
  k.norm_1 = 1.0;
  k.norm_2 = 0.5311259660135985;    // (2 sqrt(pi))^{-1/2}
  k.dnorm_1 = 0.7978845608028654;   // sqrt(2/pi)
  k.dnorm_2 = 0.3755627722324712;   // (4 sqrt(pi))^{-1/2}
  return k;
}

GridFunction estimate_density(const SizeSample& sample, double h, const UniformGrid& grid) {
  check_args(sample, h);
  auto acc = scatter<false>(sample.values, nullptr, h, grid);
  const double scale = kInvSqrt2Pi / (static_cast<double>(sample.n()) * h);
  return finish(std::move(acc), scale, grid);
}

GridFunction estimate_density_pair(const SizeSample& sample, double h, double h_prime,
                                   const UniformGrid& grid) {
  if (!(h_prime > 0.0)) throw ArgumentError("kernel estimate: bandwidth must be > 0");
  return estimate_density(sample, std::hypot(h, h_prime), grid);
}

GridFunction estimate_derivative(const SizeSample& sample, const GridFunction& g, double h,
                                 const UniformGrid& grid) {
  check_args(sample, h);
  const auto w = g_at_samples(sample, g);
  auto acc = scatter<true>(sample.values, w.data(), h, grid);
  const double scale = kInvSqrt2Pi / (static_cast<double>(sample.n()) * h * h);
  return finish(std::move(acc), scale, grid);
}

GridFunction estimate_derivative_pair(const SizeSample& sample, const GridFunction& g, double h,
                                      double h_prime, const UniformGrid& grid) {
  if (!(h_prime > 0.0)) throw ArgumentError("kernel estimate: bandwidth must be > 0");
  return estimate_derivative(sample, g, std::hypot(h, h_prime), grid);
}

GridFunction estimate_density_naive(const SizeSample& sample, double h, const UniformGrid& grid) {
  check_args(sample, h);
  std::vector<double> out(grid.m, 0.0);
  for (std::size_t j = 0; j < grid.m; ++j) {
    const double x = grid.node(j);
    double acc = 0.0;
    for (double xi : sample.values) {
      const double u = (x - xi) / h;
      acc += std::exp(-0.5 * u * u);
    }
    out[j] = acc * kInvSqrt2Pi / (static_cast<double>(sample.n()) * h);
  }
  return GridFunction(grid, std::move(out));
}

GridFunction estimate_derivative_naive(const SizeSample& sample, const GridFunction& g, double h,
                                       const UniformGrid& grid) {
  check_args(sample, h);
  const auto w = g_at_samples(sample, g);
  std::vector<double> out(grid.m, 0.0);
  for (std::size_t j = 0; j < grid.m; ++j) {
    const double x = grid.node(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < sample.n(); ++i) {
      const double u = (x - sample.values[i]) / h;
      acc += w[i] * (-u) * std::exp(-0.5 * u * u);
    }
    out[j] = acc * kInvSqrt2Pi / (static_cast<double>(sample.n()) * h * h);
  }
  return GridFunction(grid, std::move(out));
}

}  // namespace divrate
