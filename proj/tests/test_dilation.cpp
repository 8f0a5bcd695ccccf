#include <doctest.h>

#include <cmath>

#include "divrate/dilation.hpp"
#include "divrate/rng.hpp"

using namespace divrate;
using dilation::CellAverages;
using dilation::StepFunction;

namespace {

GridFunction gaussian_bump(const UniformGrid& grid, double center, double width) {
  return GridFunction::tabulate(grid, [=](double x) {
    const double t = (x - center) / width;
    return std::exp(-t * t);
  });
}

GridFunction random_piecewise_linear(const UniformGrid& grid, SplitMix64& rng) {
  std::vector<double> v(grid.m);
  for (double& x : v) x = 2.0 * rng.next_double() - 1.0;
  return GridFunction(grid, std::move(v));
}

// Sobolev-1 norm on [0, T] from the tabulation and its finite differences.
double w1_norm(const GridFunction& f, double T) {
  const double dx = f.dx();
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < f.size(); ++j) {
    const double x = f.node(j);
    if (x >= T) break;
    const double mid = 0.5 * (f[j] + f[j + 1]);
    const double slope = (f[j + 1] - f[j]) / dx;
    acc += dx * (mid * mid + slope * slope);
  }
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("dilation of simple functions") {
  UniformGrid grid(0.0, 4.0, 401);
  const auto third = GridFunction::constant(grid, 1.0 / 3.0);
  const auto l_third = dilation::apply(third);
  const auto id = GridFunction::tabulate(grid, [](double x) { return x; });
  const auto l_id = dilation::apply(id);
  for (std::size_t j = 0; j < grid.m; ++j) {
    if (2.0 * grid.node(j) > grid.x_max) break;
    CHECK(l_third[j] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(l_id[j] == doctest::Approx(7.0 * grid.node(j)).epsilon(1e-13));
  }
  const auto zero = GridFunction::constant(grid, 0.0);
  const auto l_zero = dilation::apply(zero);
  for (std::size_t j = 0; j < grid.m; ++j) CHECK(l_zero[j] == 0.0);
}

TEST_CASE("series inverse: geometric closed forms") {
  UniformGrid grid(0.0, 4.0, 513);
  const auto one = GridFunction::constant(grid, 1.0);
  const auto inv_one = dilation::inverse_series(one, 60);
  for (std::size_t j = 0; j < grid.m; ++j)
    CHECK(inv_one[j] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const auto id = GridFunction::tabulate(grid, [](double x) { return x; });
  const auto inv_id = dilation::inverse_series(id, 60);
  for (std::size_t j = 1; j < grid.m; ++j)
    CHECK(inv_id[j] == doctest::Approx(grid.node(j) / 7.0).epsilon(1e-12));

  const auto zero = GridFunction::constant(grid, 0.0);
  const auto inv_zero = dilation::inverse_series(zero, 60);
  for (std::size_t j = 0; j < grid.m; ++j) CHECK(inv_zero[j] == 0.0);
}

TEST_CASE("series inverse round trip: apply after invert restores in-grid") {
  UniformGrid grid(0.0, 4.0, 1025);
  const auto phi = gaussian_bump(grid, 0.9, 0.2);
  const auto psi = dilation::inverse_series(phi, 60);
  const auto back = dilation::apply(psi);
  for (std::size_t j = 0; j < grid.m; ++j) {
    if (2.0 * grid.node(j) > grid.x_max) break;
    CHECK(back[j] == doctest::Approx(phi[j]).epsilon(1e-9));
  }
}

TEST_CASE("cell averages: constants, affine, single cell") {
  UniformGrid grid(0.0, 4.0, 1001);
  const auto one = GridFunction::constant(grid, 1.0);
  const auto c1 = dilation::cell_averages(one, 4.0, 7);
  for (double v : c1.phi_bar) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  UniformGrid unit(0.0, 1.0, 101);
  const auto id = GridFunction::tabulate(unit, [](double x) { return x; });
  const auto c2 = dilation::cell_averages(id, 1.0, 4);
  REQUIRE(c2.phi_bar.size() == 4);
  CHECK(c2.phi_bar[0] == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
  CHECK(c2.phi_bar[1] == doctest::Approx(3.0 / 8.0).epsilon(1e-13));
  CHECK(c2.phi_bar[2] == doctest::Approx(5.0 / 8.0).epsilon(1e-13));
  CHECK(c2.phi_bar[3] == doctest::Approx(7.0 / 8.0).epsilon(1e-13));

  SplitMix64 rng(3);
  const auto f = random_piecewise_linear(unit, rng);
  const auto c3 = dilation::cell_averages(f, 1.0, 1);
  CHECK(c3.phi_bar[0] == doctest::Approx(integrate(f)).epsilon(1e-12));

  CHECK_THROWS_AS(dilation::cell_averages(one, 5.0, 4), ArgumentError);
}

TEST_CASE("recursion seeds and the constant fixed point") {
  // phi == 1: every height is 1/3; in particular H_1 = 4/21 + 3/21.
  for (std::size_t k : {std::size_t{1}, std::size_t{2}, std::size_t{5}, std::size_t{64}}) {
    CellAverages cells(4.0, k, std::vector<double>(k, 1.0));
    const auto H = dilation::invert(cells);
    for (double h : H.heights) CHECK(h == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }

  // Random first cells pin the closed-form seeds.
  SplitMix64 rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    const double p0 = rng.next_double(), p1 = rng.next_double();
    CellAverages cells(1.0, 4, {p0, p1, 0.0, 0.0});
    const auto H = dilation::invert(cells);
    CHECK(H.heights[0] == doctest::Approx(p0 / 3.0).epsilon(1e-14));
    CHECK(H.heights[1] == doctest::Approx(4.0 / 21.0 * p0 + p1 / 7.0).epsilon(1e-14));
  }

  CellAverages zero(4.0, 16, std::vector<double>(16, 0.0));
  for (double h : dilation::invert(zero).heights) CHECK(h == 0.0);
}

TEST_CASE("inversion is linear in the cell averages") {
  SplitMix64 rng(17);
  const std::size_t k = 33;
  std::vector<double> a(k), b(k), combo(k);
  for (std::size_t i = 0; i < k; ++i) {
    a[i] = 2.0 * rng.next_double() - 1.0;
    b[i] = 2.0 * rng.next_double() - 1.0;
  }
  const double alpha = 1.7, beta = -0.4;
  for (std::size_t i = 0; i < k; ++i) combo[i] = alpha * a[i] + beta * b[i];
  const auto Ha = dilation::invert(CellAverages(2.0, k, a));
  const auto Hb = dilation::invert(CellAverages(2.0, k, b));
  const auto Hc = dilation::invert(CellAverages(2.0, k, combo));
  for (std::size_t i = 0; i < k; ++i)
    CHECK(Hc.heights[i] == doctest::Approx(alpha * Ha.heights[i] + beta * Hb.heights[i]).epsilon(1e-12));
}

TEST_CASE("operator norm bound 1/sqrt(3) on random piecewise-linear inputs") {
  SplitMix64 rng(101);
  UniformGrid grid(0.0, 4.0, 257);
  const double T = 4.0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto phi = random_piecewise_linear(grid, rng);
    for (std::size_t k : {std::size_t{16}, std::size_t{1024}}) {
      const auto H = dilation::invert(dilation::cell_averages(phi, T, k));
      const double lhs = H.l2_norm();
      const double rhs = l2_norm(phi, Interval(0.0, T)) / std::sqrt(3.0);
      CHECK(lhs <= rhs + 1e-9);
    }
  }
}

TEST_CASE("inversion error obeys the T/sqrt(6k) W1 bound and the rate") {
  UniformGrid grid(0.0, 4.0, 8193);
  const double T = 4.0;
  const auto psi = gaussian_bump(grid, 0.8, 0.15);
  const auto phi = dilation::apply(psi);
  const double w1 = w1_norm(phi, T);

  double prev = 0.0;
  for (std::size_t k : {std::size_t{256}, std::size_t{1024}, std::size_t{4096}}) {
    const auto H = dilation::invert(dilation::cell_averages(phi, T, k));
    const double err = dilation::step_l2_distance(H, psi);
    CHECK(err <= T * w1 / std::sqrt(6.0 * static_cast<double>(k)));
    if (prev > 0.0) CHECK(prev / err >= 1.7);
    prev = err;
  }
}

TEST_CASE("recursion output tracks the series oracle at cell midpoints") {
  UniformGrid grid(0.0, 4.0, 4097);
  const double T = 4.0;
  const auto psi = gaussian_bump(grid, 0.9, 0.25);
  const auto phi = dilation::apply(psi);

  double prev = -1.0;
  for (std::size_t k : {std::size_t{64}, std::size_t{256}, std::size_t{1024}, std::size_t{4096}}) {
    const auto H = dilation::invert(dilation::cell_averages(phi, T, k));
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double d = H.heights[i] - dilation::inverse_series_at(phi, H.cell_mid(i), 60);
      acc += d * d;
    }
    const double dist = std::sqrt(acc * T / static_cast<double>(k));
    if (prev >= 0.0) CHECK(dist < prev);
    prev = dist;
  }
}

TEST_CASE("step function evaluation and csv") {
  StepFunction s(2.0, 4, {1.0, 2.0, 3.0, 4.0});
  CHECK(s(0.0) == 1.0);
  CHECK(s(0.49) == 1.0);
  CHECK(s(0.5) == 2.0);
  CHECK(s(1.999) == 4.0);
  CHECK(s(2.0) == 4.0);   // right endpoint joins the last cell
  CHECK(s(2.1) == 0.0);
  CHECK(s(-0.1) == 0.0);
  CHECK(s.l2_norm() == doctest::Approx(std::sqrt(0.5 * (1 + 4 + 9 + 16))).epsilon(1e-14));
}
