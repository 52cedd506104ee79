#pragma once

#include <functional>

namespace qcext {

struct MonotoneSolveResult {
  double x;
  double residual;  // |f(x) - y|
  int iterations;
  bool converged;
};

/// Solves f(x) = y for increasing f on a bracket [lo, hi] with f(lo) <= y <= f(hi).
///
/// Bisection until the bracket is narrower than switch_width, then Newton
/// steps that fall back to bisection whenever they leave the bracket. Stops
/// when |f(x) - y| <= tol, when the bracket collapses to adjacent doubles,
/// or after max_iter evaluations (converged = false in the last two cases
/// unless the residual meets tol).
MonotoneSolveResult solve_increasing(const std::function<double(double)>& f,
                                     const std::function<double(double)>& df,
                                     double y, double lo, double hi, double tol,
                                     double switch_width = 1e-3, int max_iter = 200);

}  // namespace qcext
