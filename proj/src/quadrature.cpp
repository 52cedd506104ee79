#include "qcext/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qcext/errors.hpp"

namespace qcext::quad {
namespace {

GaussRule build_rule() {
  GaussRule rule{};
  constexpr int n = kGaussOrder;
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess for the i-th root of P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double adapt(const std::function<double(double)>& f, double lo, double hi,
             double whole, double tol, int depth, int max_depth) {
  const double mid = 0.5 * (lo + hi);
  const double left = gauss_panel(f, lo, mid);
  const double right = gauss_panel(f, mid, hi);
  const double refined = left + right;
  if (std::abs(refined - whole) <= tol || mid <= lo || mid >= hi) {
    return refined;
  }
  if (depth >= max_depth) {
    throw QuadratureFailure("adaptive quadrature exceeded depth " +
                            std::to_string(max_depth) + " on [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return adapt(f, lo, mid, left, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, mid, hi, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

const GaussRule& gauss_legendre_16() {
  static const GaussRule rule = build_rule();
  return rule;
}

double gauss_panel(const std::function<double(double)>& f, double lo, double hi) {
  const auto& rule = gauss_legendre_16();
  const double half = 0.5 * (hi - lo);
  const double center = 0.5 * (hi + lo);
  double sum = 0.0;
  for (int i = 0; i < kGaussOrder; ++i) {
    sum += rule.weights[i] * f(center + half * rule.nodes[i]);
  }
  return half * sum;
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const AdaptiveOptions& opts) {
  if (lo == hi) return 0.0;
  if (hi < lo) return -integrate(f, hi, lo, opts);
  return adapt(f, lo, hi, gauss_panel(f, lo, hi), opts.abs_tol, 0, opts.max_depth);
}

}  // namespace qcext::quad
