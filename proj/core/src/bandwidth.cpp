#include "divrate/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace divrate {

BandwidthGrid::BandwidthGrid(std::vector<double> values_) : values(std::move(values_)) {
  if (values.empty()) throw ArgumentError("BandwidthGrid: empty");
  for (double h : values)
    if (!(h > 0.0) || h > 1.0) throw ArgumentError("BandwidthGrid: bandwidths must lie in (0, 1]");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] < values[i - 1]))
      throw ArgumentError("BandwidthGrid: bandwidths must be strictly decreasing");
}

BandwidthGrid build_bandwidth_grid(std::size_t n, BandwidthKind kind) {
  if (n < 1) throw ArgumentError("build_bandwidth_grid: n must be >= 1");
  const std::size_t d_max =
      kind == BandwidthKind::density
          ? n
          : static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));

  std::vector<double> hs;
  for (std::size_t scale = 1;; scale *= 10) {
    bool truncated = false;
    for (std::size_t d = 1; d <= 9; ++d) {
      const std::size_t denom = d * scale;
      if (denom > d_max) {
        truncated = true;
        break;
      }
      hs.push_back(1.0 / static_cast<double>(denom));
    }
    if (truncated || scale > d_max) break;
  }
  const double h_min = 1.0 / static_cast<double>(d_max);
  if (hs.empty() || hs.back() > h_min) hs.push_back(h_min);
  return BandwidthGrid(std::move(hs));
}

namespace {

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

// Shared core of both selections: the estimate for the convolved pair
// (h, h') is the single-bandwidth estimate at sqrt(h^2 + h'^2), so one
// evaluation per unordered pair serves both orderings.
template <class Estimate>
GLSelection run_selection(const BandwidthGrid& H, Estimate&& estimate_at,
                          const std::vector<double>& pen, const UniformGrid& grid) {
  const std::size_t q = H.size();
  std::vector<GridFunction> single;
  single.reserve(q);
  for (double h : H.values) single.push_back(estimate_at(h));

  // dist[i][j] = || est_{h_i, h_j} - est_{h_j} ||_2 on the grid.
  std::vector<std::vector<double>> dist(q, std::vector<double>(q, 0.0));
  const Interval window = grid.span();
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = i; j < q; ++j) {
      const GridFunction pair = estimate_at(std::hypot(H.values[i], H.values[j]));
      dist[i][j] = l2_distance(pair, single[j], window);
      dist[j][i] = i == j ? dist[i][j] : l2_distance(pair, single[i], window);
    }
  }

  GLSelection sel;
  sel.h = H.values;
  sel.penalty = pen;
  sel.A.resize(q, 0.0);
  for (std::size_t i = 0; i < q; ++i) {
    double a = 0.0;
    for (std::size_t j = 0; j < q; ++j) a = std::max(a, positive_part(dist[i][j] - pen[j]));
    sel.A[i] = a;
  }

  // Scan from the largest bandwidth; strict improvement required, so ties
  // resolve toward larger h.
  sel.selected = 0;
  for (std::size_t i = 1; i < q; ++i)
    if (sel.criterion(i) < sel.criterion(sel.selected)) sel.selected = i;
  sel.extremal = q > 1 && (sel.selected == 0 || sel.selected == q - 1);
  return sel;
}

}  // namespace

GLSelection gl_criterion_density(const SizeSample& sample, const BandwidthGrid& H,
                                 const GLConfig& cfg, const KernelSpec& kernel,
                                 const UniformGrid& grid) {
  if (sample.values.empty()) throw ArgumentError("gl_criterion_density: empty sample");
  // A sorted copy keeps the grouped kernel evaluation tight.
  SizeSample sorted = sample;
  std::sort(sorted.values.begin(), sorted.values.end());
  const double n = static_cast<double>(sample.n());
  const double chi = (1.0 + cfg.epsilon) * (1.0 + kernel.norm_1);
  std::vector<double> pen(H.size());
  for (std::size_t i = 0; i < H.size(); ++i)
    pen[i] = chi * kernel.norm_2 / std::sqrt(n * H.values[i]);
  return run_selection(H, [&](double s) { return estimate_density(sorted, s, grid); }, pen, grid);
}

GLSelection gl_criterion_derivative(const SizeSample& sample, const GridFunction& g,
                                    const BandwidthGrid& H, const GLConfig& cfg,
                                    const KernelSpec& kernel, const UniformGrid& grid) {
  if (sample.values.empty()) throw ArgumentError("gl_criterion_derivative: empty sample");
  SizeSample sorted = sample;
  std::sort(sorted.values.begin(), sorted.values.end());
  const double n = static_cast<double>(sample.n());
  const double g_sup = cfg.g_sup > 0.0 ? cfg.g_sup : g.max_value();
  const double chi = (1.0 + cfg.epsilon_tilde) * (1.0 + kernel.norm_1);
  std::vector<double> pen(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) {
    const double h = H.values[i];
    pen[i] = chi * g_sup * kernel.dnorm_2 / std::sqrt(n * h * h * h);
  }
  return run_selection(
      H, [&](double s) { return estimate_derivative(sorted, g, s, grid); }, pen, grid);
}

void write_gl_csv(const GLSelection& sel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "h,A,penalty,criterion,selected\n";
  char buf[160];
  for (std::size_t i = 0; i < sel.h.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", sel.h[i], sel.A[i],
                  sel.penalty[i], sel.criterion(i), i == sel.selected ? 1 : 0);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace divrate
