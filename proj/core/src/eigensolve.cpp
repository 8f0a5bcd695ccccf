#include "divrate/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace divrate {

namespace {

void check_rates(const GridFunction& g, const GridFunction& B) {
  if (!(g.grid() == B.grid()))
    throw GridMismatchError("ModelSpec: g and B tabulated on different grids");
  if (g.x_min() != 0.0) throw ArgumentError("ModelSpec: grid must start at 0");
  if (g.min_value() < 0.0 || B.min_value() < 0.0)
    throw ArgumentError("ModelSpec: rates must be nonnegative");
}

double trapezoid(const std::vector<double>& v, double dx) {
  double acc = 0.5 * (v.front() + v.back());
  for (std::size_t j = 1; j + 1 < v.size(); ++j) acc += v[j];
  return acc * dx;
}

struct IdentityDefects {
  double lambda_vs_bn;   // relative defect of lambda = integral of BN
  double moment;         // relative defect of lambda int xN = kappa int gN
  double outflow_rel;    // right-boundary flux kappa g N(x_max), relative to lambda
};

IdentityDefects identity_defects(const EigenPair& pair, const ModelSpec& model) {
  const GridFunction& N = pair.N;
  const std::size_t m = N.size();
  std::vector<double> bn(m), xn(m), gn(m);
  for (std::size_t j = 0; j < m; ++j) {
    bn[j] = model.B[j] * N[j];
    xn[j] = N.node(j) * N[j];
    gn[j] = model.g[j] * N[j];
  }
  const double dx = N.dx();
  const double i_bn = trapezoid(bn, dx);
  const double i_xn = trapezoid(xn, dx);
  const double i_gn = trapezoid(gn, dx);
  const double lam = pair.lambda;

  IdentityDefects d;
  const double scale1 = std::max(std::fabs(lam), 1e-300);
  d.lambda_vs_bn = std::fabs(lam - i_bn) / scale1;
  const double scale2 = std::max(std::fabs(model.kappa * i_gn), 1e-300);
  d.moment = std::fabs(lam * i_xn - model.kappa * i_gn) / scale2;
  d.outflow_rel = model.kappa * model.g[m - 1] * N[m - 1] / scale1;
  return d;
}

}  // namespace

ModelSpec::ModelSpec(GridFunction g_, GridFunction B_, double kappa_)
    : g(std::move(g_)), B(std::move(B_)), kappa(kappa_), x_max(g.x_max()) {
  check_rates(g, B);
  if (!(kappa > 0.0)) throw ArgumentError("ModelSpec: kappa must be > 0");
}

ModelSpec make_model_spec(const RateFunction& g, const RateFunction& B, double kappa, double x_max,
                          std::size_t m) {
  UniformGrid grid(0.0, x_max, m);
  return ModelSpec(GridFunction::tabulate(grid, g), GridFunction::tabulate(grid, B), kappa);
}

double tail_mass(const GridFunction& N) {
  const double a = N.x_max() - 0.05 * (N.x_max() - N.x_min());
  return integrate(N, Interval(a, N.x_max()));
}

EigenPair solve_eigenpair(const ModelSpec& model, std::size_t m, const SolveOptions& opts) {
  const ModelSpec* spec = &model;
  ModelSpec retabulated = model;
  if (model.g.grid().m != m) {
    UniformGrid grid(0.0, model.x_max, m);
    retabulated = ModelSpec(
        GridFunction::tabulate(grid, [&](double x) { return interp_eval(model.g, x); }),
        GridFunction::tabulate(grid, [&](double x) { return interp_eval(model.B, x); }),
        model.kappa);
    spec = &retabulated;
  }

  const GridFunction& g = spec->g;
  const GridFunction& B = spec->B;
  const double kappa = spec->kappa;
  const double dx = g.dx();
  const double max_g = g.max_value();
  const double max_B = B.max_value();
  if (max_B == 0.0)
    throw DegenerateModelError("solve_eigenpair: B vanishes identically, no division");

  double dt = opts.dt;
  if (dt <= 0.0) {
    // Keeps every update coefficient nonnegative, which implies the CFL
    // bound dt <= dx / (kappa max g) and nodewise positivity of N.
    dt = 0.9 / (kappa * max_g / dx + max_B);
  } else if (max_g > 0.0 && dt > dx / (kappa * max_g)) {
    throw ArgumentError("solve_eigenpair: dt violates the CFL bound dx / (kappa max g)");
  }

  std::vector<double> N(m), next(m), flux(m), bn(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = g.node(j);
    N[j] = x * std::exp(-x);
  }
  N[0] = 0.0;
  {
    const double mass = trapezoid(N, dx);
    for (double& v : N) v /= mass;
  }

  double lambda = 0.0;
  double lambda_checkpoint = std::numeric_limits<double>::infinity();
  const long check_every = 100;

  auto residual_norm = [&](double lam) {
    // Same discretization as the update below, with the lambda N term added.
    double acc = 0.0;
    for (std::size_t j = 1; j < m; ++j) {
      const double v = 2 * j < m ? bn[2 * j] : 0.0;
      const double r = kappa * (flux[j] - flux[j - 1]) / dx + lam * N[j] + bn[j] - 4.0 * v;
      acc += (j + 1 == m ? 0.5 : 1.0) * r * r;
    }
    return std::sqrt(acc * dx);
  };
  auto l2 = [&](const std::vector<double>& v) {
    double acc = 0.5 * v.back() * v.back();
    for (std::size_t j = 1; j + 1 < m; ++j) acc += v[j] * v[j];
    return std::sqrt(acc * dx);
  };

  bool converged = false;
  for (long it = 0; it < opts.max_iter; ++it) {
    for (std::size_t j = 0; j < m; ++j) {
      bn[j] = B[j] * N[j];
      flux[j] = g[j] * N[j];
    }
    next[0] = 0.0;
    for (std::size_t j = 1; j < m; ++j) {
      const double v = 2 * j < m ? bn[2 * j] : 0.0;
      next[j] = N[j] + dt * (-kappa * (flux[j] - flux[j - 1]) / dx - bn[j] + 4.0 * v);
    }
    const double mass = trapezoid(next, dx);
    if (!(mass > 0.0) || !std::isfinite(mass))
      throw IterationLimitError("solve_eigenpair: iteration lost positivity", mass);
    lambda = (mass - 1.0) / dt;
    for (std::size_t j = 0; j < m; ++j) N[j] = next[j] / mass;

    if ((it + 1) % check_every == 0) {
      const double stall = std::fabs(lambda - lambda_checkpoint) /
                           std::max(std::fabs(lambda), 1e-300);
      if (stall <= opts.tol) {
        for (std::size_t j = 0; j < m; ++j) {
          bn[j] = B[j] * N[j];
          flux[j] = g[j] * N[j];
        }
        if (residual_norm(lambda) <= opts.tol * l2(N)) {
          converged = true;
          break;
        }
      }
      lambda_checkpoint = lambda;
    }
  }
  if (!converged) {
    for (std::size_t j = 0; j < m; ++j) {
      bn[j] = B[j] * N[j];
      flux[j] = g[j] * N[j];
    }
    throw IterationLimitError("solve_eigenpair: no convergence within max_iter",
                              residual_norm(lambda));
  }

  for (double& v : N) v = std::max(v, 0.0);
  return EigenPair{lambda, GridFunction(g.grid(), std::move(N))};
}

namespace {

EigenPair solve_adaptive_impl(const RateFunction& g, const RateFunction& B, double kappa,
                              double x_max, std::size_t m, const SolveOptions& opts) {
  for (int attempt = 0;; ++attempt) {
    const ModelSpec spec = make_model_spec(g, B, kappa, x_max, m);
    EigenPair pair = solve_eigenpair(spec, m, opts);
    const double tm = tail_mass(pair.N);
    const IdentityDefects d = identity_defects(pair, spec);
    const bool ok = tm <= opts.tail_mass_max && d.lambda_vs_bn <= opts.identity_tol &&
                    d.moment <= opts.identity_tol;
    if (ok) return pair;
    if (attempt >= opts.max_restarts)
      throw IterationLimitError(
          "solve_eigenpair_adaptive: invariants not met after " +
              std::to_string(attempt + 1) + " attempts (tail mass " + std::to_string(tm) + ")",
          std::max(d.lambda_vs_bn, d.moment));
    if (tm > opts.tail_mass_max || d.outflow_rel > 0.5 * opts.identity_tol) {
      // Mass leaks through the right boundary: enlarge the domain, keeping
      // the node density.
      x_max *= 1.5;
      m = static_cast<std::size_t>(std::lround(static_cast<double>(m - 1) * 1.5)) + 1;
    } else {
      // Quadrature artifact: double the resolution.
      m = 2 * (m - 1) + 1;
    }
  }
}

}  // namespace

EigenPair solve_eigenpair_adaptive(const RateFunction& g, const RateFunction& B, double kappa,
                                   double x_max0, std::size_t m0, const SolveOptions& opts) {
  return solve_adaptive_impl(g, B, kappa, x_max0, m0, opts);
}

EigenPair solve_eigenpair_adaptive(const ModelSpec& model, std::size_t m,
                                   const SolveOptions& opts) {
  // Tabulated rates extend to the right by their last value if the domain
  // has to grow.
  const GridFunction g = model.g;
  const GridFunction B = model.B;
  RateFunction g_fn = [g](double x) { return x > g.x_max() ? g[g.size() - 1] : interp_eval(g, x); };
  RateFunction B_fn = [B](double x) { return x > B.x_max() ? B[B.size() - 1] : interp_eval(B, x); };
  return solve_adaptive_impl(g_fn, B_fn, model.kappa, model.x_max, m, opts);
}

double eigen_residual(const EigenPair& pair, const ModelSpec& model) {
  const GridFunction& N = pair.N;
  if (!(N.grid() == model.g.grid()))
    throw GridMismatchError("eigen_residual: pair and model on different grids");
  const std::size_t m = N.size();
  const double dx = N.dx();
  std::vector<double> bn(m), flux(m);
  for (std::size_t j = 0; j < m; ++j) {
    bn[j] = model.B[j] * N[j];
    flux[j] = model.g[j] * N[j];
  }
  double acc = 0.0;
  for (std::size_t j = 1; j < m; ++j) {
    const double v = 2 * j < m ? bn[2 * j] : 0.0;
    const double r =
        model.kappa * (flux[j] - flux[j - 1]) / dx + pair.lambda * N[j] + bn[j] - 4.0 * v;
    acc += (j + 1 == m ? 0.5 : 1.0) * r * r;
  }
  return std::sqrt(acc * dx);
}

}  // namespace divrate
