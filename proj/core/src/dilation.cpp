#include "divrate/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace divrate::dilation {

StepFunction::StepFunction(double T_, std::size_t k_, std::vector<double> heights_)
    : T(T_), k(k_), heights(std::move(heights_)) {
  if (!(T > 0.0)) throw ArgumentError("StepFunction: T must be > 0");
  if (k < 1 || heights.size() != k) throw ArgumentError("StepFunction: needs exactly k heights");
  for (double h : heights)
    if (!std::isfinite(h)) throw ArgumentError("StepFunction: non-finite height");
}

double StepFunction::operator()(double x) const {
  if (x < 0.0 || x > T) return 0.0;
  auto i = static_cast<std::size_t>(x * static_cast<double>(k) / T);
  if (i >= k) i = k - 1;  // x == T falls into the last cell
  return heights[i];
}

double StepFunction::l2_norm() const {
  double acc = 0.0;
  for (double h : heights) acc += h * h;
  return std::sqrt(acc * T / static_cast<double>(k));
}

CellAverages::CellAverages(double T_, std::size_t k_, std::vector<double> phi_bar_)
    : T(T_), k(k_), phi_bar(std::move(phi_bar_)) {
  if (!(T > 0.0)) throw ArgumentError("CellAverages: T must be > 0");
  if (k < 1 || phi_bar.size() != k) throw ArgumentError("CellAverages: needs exactly k entries");
}

GridFunction apply(const GridFunction& psi) {
  std::vector<double> out(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j)
    out[j] = 4.0 * interp_eval(psi, 2.0 * psi.node(j)) - psi[j];
  return psi.with_values(std::move(out));
}

double inverse_series_at(const GridFunction& phi, double x, int terms) {
  if (terms < 1) throw ArgumentError("inverse_series: terms must be >= 1");
  double acc = 0.0;
  double weight = 1.0;
  double arg = x;
  for (int n = 1; n <= terms; ++n) {
    weight *= 0.25;
    arg *= 0.5;
    acc += weight * interp_eval(phi, arg);
  }
  return acc;
}

GridFunction inverse_series(const GridFunction& phi, int terms) {
  std::vector<double> out(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) out[j] = inverse_series_at(phi, phi.node(j), terms);
  return phi.with_values(std::move(out));
}

namespace {

// Quadrature points over [a, b]: at least `min_points` uniform points merged
// with the interpolation breakpoints inside, so piecewise-linear integrands
// are integrated exactly.
std::vector<double> quad_points(const GridFunction& f, double a, double b, int min_points) {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(min_points) + 8);
  const int steps = min_points - 1;
  for (int q = 0; q <= steps; ++q)
    pts.push_back(a + (b - a) * static_cast<double>(q) / static_cast<double>(steps));
  const double dx = f.dx();
  const double first = std::ceil((a - f.x_min()) / dx);
  for (double t = first;; t += 1.0) {
    const double x = f.x_min() + t * dx;
    if (x >= b) break;
    if (x > a) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](double u, double v) { return std::fabs(u - v) < 1e-15 * (1.0 + std::fabs(u)); }),
            pts.end());
  pts.back() = b;
  return pts;
}

double integrate_interp(const GridFunction& f, double a, double b, int min_points) {
  const auto pts = quad_points(f, a, b, min_points);
  double acc = 0.0;
  double v_prev = interp_eval(f, pts[0]);
  for (std::size_t q = 1; q < pts.size(); ++q) {
    const double v = interp_eval(f, pts[q]);
    acc += 0.5 * (v_prev + v) * (pts[q] - pts[q - 1]);
    v_prev = v;
  }
  return acc;
}

// Exact integral of (c - f)^2 over [a, b] for the piecewise-linear
// interpolant f: Simpson is exact for the quadratic integrand once the
// breakpoints are quadrature points.
double integrate_shift_sq(const GridFunction& f, double c, double a, double b, int min_points) {
  const auto pts = quad_points(f, a, b, min_points);
  double acc = 0.0;
  double v_prev = c - interp_eval(f, pts[0]);
  for (std::size_t q = 1; q < pts.size(); ++q) {
    const double v = c - interp_eval(f, pts[q]);
    const double vm = c - interp_eval(f, 0.5 * (pts[q - 1] + pts[q]));
    acc += (pts[q] - pts[q - 1]) * (v_prev * v_prev + 4.0 * vm * vm + v * v) / 6.0;
    v_prev = v;
  }
  return acc;
}

}  // namespace

CellAverages cell_averages(const GridFunction& phi, double T, std::size_t k) {
  if (k < 1) throw ArgumentError("cell_averages: k must be >= 1");
  if (T > phi.x_max() + 1e-12 * (1.0 + std::fabs(phi.x_max())))
    throw ArgumentError("cell_averages: T extends beyond the grid");
  std::vector<double> bar(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double a = T * static_cast<double>(i) / static_cast<double>(k);
    const double b = T * static_cast<double>(i + 1) / static_cast<double>(k);
    bar[i] = integrate_interp(phi, a, std::min(b, phi.x_max()), 9) / (b - a);
  }
  return CellAverages(T, k, std::move(bar));
}

StepFunction invert(const CellAverages& cells) {
  const std::size_t k = cells.k;
  const std::vector<double>& phi = cells.phi_bar;
  std::vector<double> H(k);

  H[0] = phi[0] / 3.0;
  if (k > 1) H[1] = (4.0 / 21.0) * phi[0] + (1.0 / 7.0) * phi[1];
  for (std::size_t i = 2; i < k; ++i) {
    if (i % 2 == 0) {
      const std::size_t j = i / 2;
      H[i] = 0.25 * (H[j] + phi[j]);
    } else {
      const std::size_t jl = (i - 1) / 2;
      const std::size_t jr = (i + 1) / 2;
      H[i] = 0.125 * (H[jl] + H[jr] + phi[jl] + phi[jr]);
    }
  }
  return StepFunction(cells.T, k, std::move(H));
}

double step_l2_distance(const StepFunction& step, const GridFunction& f) {
  if (step.T > f.x_max() + 1e-12 * (1.0 + std::fabs(f.x_max())))
    throw ArgumentError("step_l2_distance: step extends beyond the grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < step.k; ++i) {
    const double a = step.cell_left(i);
    const double b = std::min(step.cell_right(i), step.T);
    acc += integrate_shift_sq(f, step.heights[i], a, b, 9);
  }
  return std::sqrt(std::max(acc, 0.0));
}

void write_step_csv(const StepFunction& step, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "cell_left,cell_right,height\n";
  char buf[120];
  for (std::size_t i = 0; i < step.k; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", step.cell_left(i), step.cell_right(i),
                  step.heights[i]);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace divrate::dilation
