#include <doctest.h>

#include <cmath>

#include "divrate/eigensolve.hpp"
#include "divrate/models.hpp"

using namespace divrate;

namespace {

double integral_of_product(const GridFunction& a, const GridFunction& b) {
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) v[j] = a[j] * b[j];
  return integrate(GridFunction(a.grid(), std::move(v)));
}

double moment(const GridFunction& N) {
  std::vector<double> v(N.size());
  for (std::size_t j = 0; j < N.size(); ++j) v[j] = N.node(j) * N[j];
  return integrate(GridFunction(N.grid(), std::move(v)));
}

ModelSpec tabulate_on_pair_grid(const EigenPair& pair, const std::string& g_name,
                                const std::string& B_name, double kappa) {
  const auto grid = pair.N.grid();
  return ModelSpec(GridFunction::tabulate(grid, named_rate(g_name)),
                   GridFunction::tabulate(grid, named_rate(B_name)), kappa);
}

void check_identities(const EigenPair& pair, const ModelSpec& model) {
  const double i_bn = integral_of_product(model.B, pair.N);
  const double i_gn = integral_of_product(model.g, pair.N);
  const double i_xn = moment(pair.N);
  CHECK(pair.lambda == doctest::Approx(i_bn).epsilon(1e-6));
  CHECK(pair.lambda * i_xn == doctest::Approx(model.kappa * i_gn).epsilon(1e-6));
}

}  // namespace

TEST_CASE("constant rates: lambda = 1 and both integral identities") {
  const auto pair = solve_eigenpair_adaptive(named_rate("one"), named_rate("one"), 1.0, 4.0, 2001);
  CHECK(pair.lambda == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(integrate(pair.N) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(pair.N.min_value() >= 0.0);
  CHECK(pair.N[0] == 0.0);
  CHECK(tail_mass(pair.N) <= 1e-4);
  // the exponential tail forces a domain beyond [0, 4]
  CHECK(pair.N.x_max() > 4.0);
  check_identities(pair, tabulate_on_pair_grid(pair, "one", "one", 1.0));
}

TEST_CASE("linear growth with quadratic division: lambda = kappa") {
  const auto pair =
      solve_eigenpair_adaptive(named_rate("linear"), named_rate("square"), 1.0, 4.0, 2001);
  CHECK(pair.lambda == doctest::Approx(1.0).epsilon(1e-6));
  check_identities(pair, tabulate_on_pair_grid(pair, "linear", "square", 1.0));
}

TEST_CASE("two-peak and smooth-bump division rates meet the identities") {
  for (const char* B_name : {"b2", "b3"}) {
    const auto pair = solve_eigenpair_adaptive(named_rate("one"), named_rate(B_name), 1.0, 4.0, 2001);
    CHECK(pair.lambda > 0.0);
    CHECK(tail_mass(pair.N) <= 1e-4);
    check_identities(pair, tabulate_on_pair_grid(pair, "one", B_name, 1.0));
  }
}

TEST_CASE("scaling B and kappa by c scales lambda by c and keeps N") {
  SolveOptions opts;
  const auto base = solve_eigenpair_adaptive(named_rate("one"), named_rate("b3"), 1.0, 4.0, 1001, opts);
  const double c = 2.0;
  const auto scaled = solve_eigenpair_adaptive(
      named_rate("one"), [c](double x) { return c * named_rate("b3")(x); }, c, 4.0, 1001, opts);
  CHECK(scaled.lambda == doctest::Approx(c * base.lambda).epsilon(1e-6));
  REQUIRE(scaled.N.grid() == base.N.grid());
  CHECK(l2_distance(scaled.N, base.N) <= 1e-6);
}

TEST_CASE("B identically zero is degenerate") {
  CHECK_THROWS_AS(
      solve_eigenpair_adaptive(named_rate("one"), [](double) { return 0.0; }, 1.0, 4.0, 101),
      DegenerateModelError);
}

TEST_CASE("converged residual is small; perturbations raise it") {
  const ModelSpec model = make_model_spec(named_rate("one"), named_rate("b3"), 1.0, 4.0, 1001);
  SolveOptions opts;
  const auto pair = solve_eigenpair(model, 1001, opts);

  std::vector<double> n2(pair.N.values());
  double norm_sq = 0.0;
  const double dx = pair.N.dx();
  for (std::size_t j = 0; j < n2.size(); ++j)
    norm_sq += (j == 0 || j + 1 == n2.size() ? 0.5 : 1.0) * n2[j] * n2[j] * dx;
  const double n_norm = std::sqrt(norm_sq);

  const double res = eigen_residual(pair, model);
  CHECK(res <= opts.tol * n_norm);

  // bump one interior node
  std::vector<double> bumped = pair.N.values();
  bumped[400] += 0.1;
  EigenPair perturbed{pair.lambda, GridFunction(pair.N.grid(), bumped)};
  CHECK(eigen_residual(perturbed, model) > res);

  // the residual is affine in lambda with slope ||N||_2
  EigenPair shifted{pair.lambda + 1.0, pair.N};
  CHECK(eigen_residual(shifted, model) == doctest::Approx(n_norm).epsilon(1e-4));
  EigenPair shifted2{pair.lambda + 2.0, pair.N};
  CHECK(eigen_residual(shifted2, model) == doctest::Approx(2.0 * n_norm).epsilon(1e-4));
}

TEST_CASE("residual demands matching grids") {
  const ModelSpec model = make_model_spec(named_rate("one"), named_rate("b3"), 1.0, 4.0, 501);
  const auto pair = solve_eigenpair(model, 501);
  const ModelSpec other = make_model_spec(named_rate("one"), named_rate("b3"), 1.0, 4.0, 301);
  CHECK_THROWS_AS(eigen_residual(pair, other), GridMismatchError);
}

TEST_CASE("explicit dt above the CFL bound is rejected") {
  const ModelSpec model = make_model_spec(named_rate("one"), named_rate("one"), 1.0, 4.0, 401);
  SolveOptions opts;
  opts.dt = 1.0;  // dx / (kappa max g) = 0.01
  CHECK_THROWS_AS(solve_eigenpair(model, 401, opts), ArgumentError);
}

TEST_CASE("tabulated model extends by its last value when the domain grows") {
  const ModelSpec model = make_model_spec(named_rate("one"), named_rate("one"), 1.0, 4.0, 801);
  const auto pair = solve_eigenpair_adaptive(model, 801);
  CHECK(pair.N.x_max() > 4.0);
  CHECK(pair.lambda == doctest::Approx(1.0).epsilon(1e-5));
}
