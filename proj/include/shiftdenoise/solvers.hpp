#pragma once

#include "shiftdenoise/operators.hpp"
#include "shiftdenoise/signal.hpp"

namespace shiftdenoise {

struct SolverOptions {
  int max_iters = 5000;
  double tol = 1e-9;        // relative fixed-point residual of the prox-gradient map
  double step_safety = 0.1; // inflates the Lipschitz estimate before stepping
};

struct SolverResult {
  cvec solution;
  double objective = 0.0;
  double certificate = 0.0;  // prox-gradient fixed-point residual at the solution
  int iterations = 0;
  bool converged = false;
};

/// Euclidean projection onto { g : sum_k |g_k| <= r }. Phases of nonzero
/// entries are preserved; magnitudes get the simplex-style soft threshold,
/// located by bisection.
cvec project_l1_ball(const cvec& f, double r);

/// argmin_g  0.5*||g - f||^2 + gamma*(sum_k |g_k|)^2, by sorting magnitudes
/// and solving the closed-form threshold. Phases preserved.
cvec prox_squared_l1(const cvec& f, double gamma);

/// Accelerated projected gradient for  min ||b - A f||^2  s.t.  ||f||_1 <= r,
/// with function-value restarts and backtracking on the step.
SolverResult solve_constrained(const LinearOperator& A, const cvec& b, double r,
                               const SolverOptions& opts = {},
                               std::optional<double> op_norm_hint = std::nullopt);

/// Accelerated proximal gradient for  min ||b - A f||^2 + c*(||f||_1)^2.
SolverResult solve_penalized(const LinearOperator& A, const cvec& b, double c,
                             const SolverOptions& opts = {},
                             std::optional<double> op_norm_hint = std::nullopt);

}  // namespace shiftdenoise
