#pragma once

#include <array>
#include <functional>

namespace qcext::quad {

inline constexpr int kGaussOrder = 16;

struct GaussRule {
  std::array<double, kGaussOrder> nodes;    // on [-1, 1]
  std::array<double, kGaussOrder> weights;
};

/// Gauss-Legendre rule of order 16, computed once by Newton iteration on P_16.
const GaussRule& gauss_legendre_16();

/// Single-panel Gauss-Legendre estimate of the integral over [lo, hi].
double gauss_panel(const std::function<double(double)>& f, double lo, double hi);

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  int max_depth = 48;
};

/// Adaptive interval-halving Gauss-Legendre quadrature.
///
/// A panel is accepted when its 16-point estimate agrees with the sum of its
/// two halves to within the tolerance budget assigned to it; the budget is
/// split evenly between children on refinement. Throws QuadratureFailure
/// when max_depth is exceeded.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const AdaptiveOptions& opts = {});

}  // namespace qcext::quad
