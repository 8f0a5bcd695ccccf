#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "divrate/errors.hpp"

namespace divrate {

/// Closed interval [a, b] with finite a < b.
struct Interval {
  double a;
  double b;

  Interval(double a_, double b_);

  double length() const { return b - a; }
  bool contains(double x) const { return x >= a && x <= b; }
};

/// Layout of a uniform grid: m nodes x_j = x_min + j * dx over [x_min, x_max].
/// The spacing is derived, never stored per node.
struct UniformGrid {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t m = 2;

  UniformGrid() = default;
  UniformGrid(double x_min_, double x_max_, std::size_t m_);

  double dx() const { return (x_max - x_min) / static_cast<double>(m - 1); }
  double node(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }
  Interval span() const { return Interval(x_min, x_max); }

  bool operator==(const UniformGrid& o) const {
    return x_min == o.x_min && x_max == o.x_max && m == o.m;
  }
};

/// A real function tabulated on a uniform grid. Values are immutable after
/// construction, so instances can be shared freely between threads; every
/// free function operating on GridFunction is pure.
class GridFunction {
 public:
  /// Zero function on the unit grid with two nodes.
  GridFunction() : values_(2, 0.0) {}

  GridFunction(UniformGrid grid, std::vector<double> values);

  static GridFunction constant(const UniformGrid& grid, double c);

  template <class F>
  static GridFunction tabulate(const UniformGrid& grid, F&& f) {
    std::vector<double> v(grid.m);
    for (std::size_t j = 0; j < grid.m; ++j) v[j] = f(grid.node(j));
    return GridFunction(grid, std::move(v));
  }

  const UniformGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double x_min() const { return grid_.x_min; }
  double x_max() const { return grid_.x_max; }
  double dx() const { return grid_.dx(); }
  double node(std::size_t j) const { return grid_.node(j); }
  double operator[](std::size_t j) const { return values_[j]; }
  const std::vector<double>& values() const { return values_; }

  /// New function on the same grid with different values.
  GridFunction with_values(std::vector<double> values) const;

  double max_value() const;
  double min_value() const;

 private:
  UniformGrid grid_;
  std::vector<double> values_;
};

/// Trapezoid-rule integral over the full grid.
double integrate(const GridFunction& f);

/// Trapezoid-rule integral restricted to a window inside the grid. Window
/// endpoints need not be nodes; values there come from linear interpolation.
double integrate(const GridFunction& f, const Interval& window);

/// Piecewise-linear interpolation; exact at nodes, 0 outside [x_min, x_max]
/// (tabulated densities are treated as compactly supported).
double interp_eval(const GridFunction& f, double x);

/// sqrt of the trapezoid integral of (f - g)^2 restricted to the window.
/// f and g must share a grid.
double l2_distance(const GridFunction& f, const GridFunction& g, const Interval& window);
double l2_distance(const GridFunction& f, const GridFunction& g);

/// L2 norm of f over the window (distance to the zero function).
double l2_norm(const GridFunction& f, const Interval& window);
double l2_norm(const GridFunction& f);

/// Two-column CSV, header "x,value", one row per node, nodes ascending.
void write_csv(const GridFunction& f, const std::string& path);
GridFunction read_grid_csv(const std::string& path);

}  // namespace divrate
