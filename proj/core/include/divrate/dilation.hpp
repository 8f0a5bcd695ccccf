#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "divrate/grid.hpp"

namespace divrate::dilation {

/// Piecewise-constant function on the k-cell partition of [0, T]: height i
/// lives on [i T/k, (i+1) T/k).
struct StepFunction {
  double T = 1.0;
  std::size_t k = 1;
  std::vector<double> heights;

  StepFunction() : heights(1, 0.0) {}
  StepFunction(double T_, std::size_t k_, std::vector<double> heights_);

  double cell_left(std::size_t i) const { return T * static_cast<double>(i) / static_cast<double>(k); }
  double cell_right(std::size_t i) const { return T * static_cast<double>(i + 1) / static_cast<double>(k); }
  double cell_mid(std::size_t i) const { return T * (static_cast<double>(i) + 0.5) / static_cast<double>(k); }

  /// Value at x; 0 outside [0, T).
  double operator()(double x) const;

  /// Exact L2 norm on [0, T]: sqrt(T/k * sum of squared heights).
  double l2_norm() const;
};

/// Cell averages of a function over the same partition.
struct CellAverages {
  double T = 1.0;
  std::size_t k = 1;
  std::vector<double> phi_bar;

  CellAverages(double T_, std::size_t k_, std::vector<double> phi_bar_);
};

/// The dilation operator psi -> 4 psi(2x) - psi(x), evaluated nodewise with
/// interpolation for psi(2x) (0 beyond the grid).
GridFunction apply(const GridFunction& psi);

/// Truncated series inverse sum_{n>=1} 4^{-n} phi(2^{-n} x) at one point; the
/// truncation tail is bounded by sup|phi| * 4^{-terms} / 3.
double inverse_series_at(const GridFunction& phi, double x, int terms);

/// The series inverse tabulated on phi's grid. Test oracle for the cell
/// recursion below.
GridFunction inverse_series(const GridFunction& phi, int terms);

/// Averages of the interpolated phi over the k cells of [0, T], by trapezoid
/// quadrature with at least 8 points per cell; quadrature points include the
/// interpolation breakpoints, so the averages are exact for the interpolant.
CellAverages cell_averages(const GridFunction& phi, double T, std::size_t k);

/// The approximate inverse on the cell partition: heights obey
///   H_i = (H_{i/2} + phi_{i/2}) / 4
/// with half indices averaging the two neighbors when i is odd; the two
/// self-referencing seeds are solved in closed form,
///   H_0 = phi_0 / 3,  H_1 = 4/21 phi_0 + 1/7 phi_1.
StepFunction invert(const CellAverages& cells);

/// L2 distance on [0, T] between a step function and a grid function,
/// integrated cell by cell (quadrature points include the interpolation
/// breakpoints).
double step_l2_distance(const StepFunction& step, const GridFunction& f);

/// CSV: columns cell_left,cell_right,height.
void write_step_csv(const StepFunction& step, const std::string& path);

}  // namespace divrate::dilation
