#include "divrate/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace divrate {

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
  if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b))
    throw ArgumentError("Interval requires finite a < b");
}

UniformGrid::UniformGrid(double x_min_, double x_max_, std::size_t m_)
    : x_min(x_min_), x_max(x_max_), m(m_) {
  if (!(std::isfinite(x_min) && std::isfinite(x_max)) || !(x_max > x_min))
    throw ArgumentError("UniformGrid requires finite x_max > x_min");
  if (m < 2) throw ArgumentError("UniformGrid requires at least 2 nodes");
}

GridFunction::GridFunction(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.m)
    throw ArgumentError("GridFunction: value count does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw ArgumentError("GridFunction: non-finite value");
}

GridFunction GridFunction::constant(const UniformGrid& grid, double c) {
  return GridFunction(grid, std::vector<double>(grid.m, c));
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
  return GridFunction(grid_, std::move(values));
}

double GridFunction::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double GridFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double integrate(const GridFunction& f) {
  const std::size_t m = f.size();
  double acc = 0.5 * (f[0] + f[m - 1]);
  for (std::size_t j = 1; j + 1 < m; ++j) acc += f[j];
  return acc * f.dx();
}

double interp_eval(const GridFunction& f, double x) {
  const UniformGrid& g = f.grid();
  if (x < g.x_min || x > g.x_max) return 0.0;
  double t = (x - g.x_min) / g.dx();
  auto j = static_cast<std::size_t>(t);
  if (j > g.m - 2) j = g.m - 2;
  const double frac = t - static_cast<double>(j);
  return f[j] + frac * (f[j + 1] - f[j]);
}

namespace {

// Trapezoid rule for an integrand defined by per-point evaluations on the
// partition {a, interior nodes, b}.
template <class Eval>
double window_trapezoid(const GridFunction& f, const Interval& window, Eval&& value_at) {
  const UniformGrid& g = f.grid();
  if (window.a < g.x_min - 1e-12 * (1.0 + std::fabs(g.x_min)) ||
      window.b > g.x_max + 1e-12 * (1.0 + std::fabs(g.x_max)))
    throw ArgumentError("window extends outside the grid");

  const double a = std::max(window.a, g.x_min);
  const double b = std::min(window.b, g.x_max);
  const double dx = g.dx();

  // First node strictly inside (a, b).
  auto lo = static_cast<std::size_t>(std::ceil((a - g.x_min) / dx - 1e-12));
  while (lo < g.m && g.node(lo) <= a) ++lo;

  double acc = 0.0;
  double x_prev = a;
  double v_prev = value_at(a);
  for (std::size_t j = lo; j < g.m && g.node(j) < b; ++j) {
    const double x = g.node(j);
    const double v = value_at(x);
    acc += 0.5 * (v_prev + v) * (x - x_prev);
    x_prev = x;
    v_prev = v;
  }
  const double v_b = value_at(b);
  acc += 0.5 * (v_prev + v_b) * (b - x_prev);
  return acc;
}

}  // namespace

double integrate(const GridFunction& f, const Interval& window) {
  return window_trapezoid(f, window, [&](double x) { return interp_eval(f, x); });
}

double l2_distance(const GridFunction& f, const GridFunction& g, const Interval& window) {
  if (!(f.grid() == g.grid()))
    throw GridMismatchError("l2_distance: functions tabulated on different grids");
  const double sq = window_trapezoid(f, window, [&](double x) {
    const double d = interp_eval(f, x) - interp_eval(g, x);
    return d * d;
  });
  return std::sqrt(std::max(sq, 0.0));
}

double l2_distance(const GridFunction& f, const GridFunction& g) {
  return l2_distance(f, g, f.grid().span());
}

double l2_norm(const GridFunction& f, const Interval& window) {
  const double sq =
      window_trapezoid(f, window, [&](double x) { const double v = interp_eval(f, x); return v * v; });
  return std::sqrt(std::max(sq, 0.0));
}

double l2_norm(const GridFunction& f) { return l2_norm(f, f.grid().span()); }

void write_csv(const GridFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "x,value\n";
  char buf[80];
  for (std::size_t j = 0; j < f.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.node(j), f[j]);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

GridFunction read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty grid CSV: " + path);
  std::vector<double> xs, vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string sx, sv;
    if (!std::getline(ss, sx, ',') || !std::getline(ss, sv))
      throw IoError("malformed row in grid CSV: " + path);
    xs.push_back(std::stod(sx));
    vs.push_back(std::stod(sv));
  }
  if (xs.size() < 2) throw IoError("grid CSV needs at least two rows: " + path);
  UniformGrid grid(xs.front(), xs.back(), xs.size());
  const double dx = grid.dx();
  for (std::size_t j = 0; j < xs.size(); ++j)
    if (std::fabs(xs[j] - grid.node(j)) > 1e-9 * (1.0 + std::fabs(xs[j])) + 1e-12)
      throw IoError("grid CSV nodes are not uniform: " + path);
  (void)dx;
  return GridFunction(grid, std::move(vs));
}

}  // namespace divrate
