#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "divrate/grid.hpp"
#include "divrate/rng.hpp"

using namespace divrate;

namespace {

GridFunction random_function(const UniformGrid& grid, SplitMix64& rng) {
  std::vector<double> v(grid.m);
  for (double& x : v) x = 2.0 * rng.next_double() - 1.0;
  return GridFunction(grid, std::move(v));
}

}  // namespace

TEST_CASE("construction rejects bad inputs") {
  CHECK_THROWS_AS(UniformGrid(0.0, 0.0, 11), ArgumentError);
  CHECK_THROWS_AS(UniformGrid(0.0, 1.0, 1), ArgumentError);
  CHECK_THROWS_AS(Interval(2.0, 2.0), ArgumentError);
  UniformGrid g(0.0, 1.0, 3);
  CHECK_THROWS_AS(GridFunction(g, {1.0, 2.0}), ArgumentError);
  CHECK_THROWS_AS(GridFunction(g, {1.0, std::nan(""), 0.0}), ArgumentError);
}

TEST_CASE("integrate: zero, constant, affine") {
  UniformGrid g(0.0, 4.0, 101);
  CHECK(integrate(GridFunction::constant(g, 0.0)) == 0.0);
  CHECK(integrate(GridFunction::constant(g, 1.0)) == doctest::Approx(4.0).epsilon(1e-14));

  // trapezoid is exact for affine integrands
  UniformGrid u(0.0, 1.0, 101);
  auto f = GridFunction::tabulate(u, [](double x) { return x; });
  CHECK(integrate(f) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("integrate is linear") {
  UniformGrid g(0.0, 2.0, 97);
  SplitMix64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    auto f = random_function(g, rng);
    auto h = random_function(g, rng);
    const double a = 4.0 * rng.next_double() - 2.0;
    const double b = 4.0 * rng.next_double() - 2.0;
    std::vector<double> combo(g.m);
    for (std::size_t j = 0; j < g.m; ++j) combo[j] = a * f[j] + b * h[j];
    const double lhs = integrate(GridFunction(g, combo));
    const double rhs = a * integrate(f) + b * integrate(h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("l2_distance basics") {
  UniformGrid g(0.0, 4.0, 101);
  auto one = GridFunction::constant(g, 1.0);
  auto zero = GridFunction::constant(g, 0.0);
  Interval w(0.0, 4.0);
  CHECK(l2_distance(one, one, w) == 0.0);
  CHECK(l2_distance(one, zero, w) == doctest::Approx(2.0).epsilon(1e-14));

  UniformGrid u(0.0, 1.0, 101);
  auto f = GridFunction::tabulate(u, [](double x) { return x; });
  auto z = GridFunction::constant(u, 0.0);
  // closed form 1/sqrt(3); trapezoid error on x^2 at this resolution ~1.3e-5
  CHECK(l2_distance(f, z, Interval(0.0, 1.0)) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(5e-5));

  auto other_grid = GridFunction::constant(UniformGrid(0.0, 4.0, 100), 1.0);
  CHECK_THROWS_AS(l2_distance(one, other_grid, w), GridMismatchError);
  CHECK_THROWS_AS(l2_distance(one, zero, Interval(0.0, 5.0)), ArgumentError);
}

TEST_CASE("l2_distance window need not align with nodes") {
  UniformGrid g(0.0, 4.0, 101);
  auto one = GridFunction::constant(g, 1.0);
  auto zero = GridFunction::constant(g, 0.0);
  const double d = l2_distance(one, zero, Interval(0.13, 2.71));
  CHECK(d == doctest::Approx(std::sqrt(2.71 - 0.13)).epsilon(1e-12));
}

TEST_CASE("l2_distance satisfies the triangle inequality") {
  UniformGrid g(0.0, 3.0, 64);
  SplitMix64 rng(7);
  Interval w(0.25, 2.75);
  for (int rep = 0; rep < 50; ++rep) {
    auto f = random_function(g, rng);
    auto h = random_function(g, rng);
    auto k = random_function(g, rng);
    CHECK(l2_distance(f, k, w) <= l2_distance(f, h, w) + l2_distance(h, k, w) + 1e-10);
  }
}

TEST_CASE("interp_eval: nodes, midpoints, out of support") {
  UniformGrid g(0.0, 1.0, 2);
  GridFunction f(g, {0.0, 1.0});
  CHECK(interp_eval(f, 0.0) == 0.0);
  CHECK(interp_eval(f, 1.0) == 1.0);
  CHECK(interp_eval(f, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(interp_eval(f, 2.0) == 0.0);
  CHECK(interp_eval(f, -0.1) == 0.0);
}

TEST_CASE("interp_eval reproduces affine functions between nodes") {
  UniformGrid g(0.0, 2.0, 41);
  auto f = GridFunction::tabulate(g, [](double x) { return 3.0 * x - 1.0; });
  SplitMix64 rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const double x = 2.0 * rng.next_double();
    CHECK(interp_eval(f, x) == doctest::Approx(3.0 * x - 1.0).epsilon(1e-13));
  }
}

TEST_CASE("csv round trip") {
  UniformGrid g(0.0, 4.0, 33);
  SplitMix64 rng(23);
  auto f = random_function(g, rng);
  const auto path = std::filesystem::temp_directory_path() / "divrate_grid_test.csv";
  write_csv(f, path.string());
  auto back = read_grid_csv(path.string());
  REQUIRE(back.size() == f.size());
  CHECK(back.grid() == f.grid());
  for (std::size_t j = 0; j < f.size(); ++j) CHECK(back[j] == f[j]);
  std::filesystem::remove(path);
}
