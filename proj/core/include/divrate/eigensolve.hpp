#pragma once

#include <cstddef>

#include "divrate/grid.hpp"
#include "divrate/models.hpp"

namespace divrate {

/// Growth model tabulated on a grid over [0, x_max]: transport rate g (up to
/// the constant kappa) and division rate B. The boundary value of the density
/// at 0 is pinned to zero by the solver, which honors B(0)N(0) = 0.
struct ModelSpec {
  GridFunction g;
  GridFunction B;
  double kappa = 1.0;
  double x_max = 0.0;

  ModelSpec(GridFunction g_, GridFunction B_, double kappa_);
};

/// First eigenpair of the transport-fragmentation operator: the Malthus
/// exponent lambda and the stable size density N (nonnegative, unit mass).
struct EigenPair {
  double lambda = 0.0;
  GridFunction N;
};

struct SolveOptions {
  double dt = 0.0;            // <= 0: derived from the CFL and positivity limits
  double tol = 1e-7;          // relative stall of lambda over 100 steps + residual gate
  long max_iter = 4000000;    // time steps per attempt
  int max_restarts = 6;       // domain/resolution enlargements
  double tail_mass_max = 1e-4;       // mass allowed in the last 5% of the grid
  double identity_tol = 1e-6;        // relative defect allowed in the integral identities
};

/// Tabulate a model on m nodes over [0, x_max].
ModelSpec make_model_spec(const RateFunction& g, const RateFunction& B, double kappa, double x_max,
                          std::size_t m);

/// Solve the eigenproblem on the model's own domain by power iteration
/// (explicit upwind transport, explicit fragmentation, mass renormalization
/// each step; lambda read off the per-step mass growth). Throws
/// IterationLimitError if the iteration stalls and DegenerateModelError when
/// B vanishes identically.
EigenPair solve_eigenpair(const ModelSpec& model, std::size_t m, const SolveOptions& opts = {});

/// Same solve, but restarts with x_max *= 1.5 (node density preserved)
/// whenever the converged pair leaks mass through the right boundary (tail
/// mass, or an integral-identity defect dominated by the boundary flux), and
/// with doubled resolution when the defect is a quadrature artifact.
EigenPair solve_eigenpair_adaptive(const RateFunction& g, const RateFunction& B, double kappa,
                                   double x_max0, std::size_t m0, const SolveOptions& opts = {});

/// Convenience: adaptive solve against tabulated rates, extended to the right
/// by their last value if the domain has to grow.
EigenPair solve_eigenpair_adaptive(const ModelSpec& model, std::size_t m,
                                   const SolveOptions& opts = {});

/// L2 norm of the discretized eigenproblem residual
///   kappa d/dx(gN) + lambda N - 4 (BN)(2x) + (BN)(x)
/// using the same upwind difference and interpolation as the solver. The pair
/// and the model must live on the same grid.
double eigen_residual(const EigenPair& pair, const ModelSpec& model);

/// Mass in the last 5% of the grid; the adaptive solver keeps it below
/// SolveOptions::tail_mass_max.
double tail_mass(const GridFunction& N);

}  // namespace divrate
