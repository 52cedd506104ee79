#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qcext/extensions.hpp"
#include "qcext/realmap.hpp"

namespace qcext {

/// Rectangular evaluation grid: linear in x, logarithmic in y.
struct GridSpec {
  double x_min = -2.0;
  double x_max = 2.0;
  double y_min = 1e-2;
  double y_max = 2.0;
  int nx = 20;
  int ny = 20;

  /// DomainError unless y_min > 0, y_max >= y_min, x_max >= x_min, nx, ny >= 2.
  void validate() const;
  /// Row-major (y outer, x inner) list of points.
  std::vector<HalfPlanePoint> points() const;
};

// ---------------------------------------------------------------------------
// M-condition

/// (f(x+t) - f(x)) / (f(x) - f(x-t)); DomainError if the denominator is <= 0.
double m_ratio(const RealMap& f, double x, double t);

struct Range {
  double lo;
  double hi;
};

/// Grid supremum of max(ratio, 1/ratio) over grid_n x grid_n samples of
/// x_range x t_range (t_range.lo > 0).
double estimate_m(const RealMap& f, Range x_range, Range t_range, int grid_n);

// ---------------------------------------------------------------------------
// Dilatation

/// e^{i sigma} = (a - i)(a - alpha + i) / ((a + i)(a - alpha - i)).
Complex sigma_factor(const ExtParams& p);

struct DilatationReport {
  HalfPlanePoint z;
  double theta = 1.0;       // f'(x - (alpha - a) y) / f'(x + a y)
  Complex sigma_factor{1.0, 0.0};
  double analytic = 0.0;    // |(1 - theta) / (1 - e^{i sigma} theta)|
  double numeric = 0.0;     // finite-difference Beltrami modulus, NaN if not computed
  double gap = 0.0;         // numeric - analytic
};

/// Closed-form Beltrami coefficient dbar F / dF of F = E_{a,alpha} f at z.
/// For alpha > 0 its modulus is |(1 - theta)/(1 - e^{i sigma} theta)|; for
/// alpha = 0 it is y f'' (-2a + i(1 - a^2)) / (2 f' + i (1 + a^2) y f''),
/// which needs a C^2 map. A zero f'(x + a y) with f'(x - (alpha - a) y) > 0
/// gives the theta -> infinity limit (modulus 1). DomainError if f' < 0 at a
/// sample point or both derivatives vanish.
Complex beltrami_analytic(const RealMap& f, const ExtParams& p, const HalfPlanePoint& z);

/// Report with theta, e^{i sigma} and the analytic modulus (numeric = NaN).
/// Requires alpha > 0.
DilatationReport dilatation_analytic(const RealMap& f, const ExtParams& p,
                                     const HalfPlanePoint& z);

using PlaneMap = std::function<Complex(const HalfPlanePoint&)>;

/// dbar F / dF with dbar = (d_x + i d_y)/2, d = (d_x - i d_y)/2 from centered
/// differences of step h. Needs h > 0, z.y > 2h; DomainError if |dF| < 1e-12.
Complex beltrami_numeric(const PlaneMap& F, const HalfPlanePoint& z, double h);

inline double dilatation_numeric(const PlaneMap& F, const HalfPlanePoint& z, double h) {
  return std::abs(beltrami_numeric(F, z, h));
}

/// Analytic report completed with the numeric modulus at step h.
DilatationReport dilatation_report(const RealMap& f, const ExtParams& p,
                                   const HalfPlanePoint& z, double h);

/// max over points of |beltrami_analytic| (alpha = 0 allowed for C^2 maps).
double sup_dilatation(const RealMap& f, const ExtParams& p,
                      const std::vector<HalfPlanePoint>& grid);

/// Largest |(1 - theta)/(1 - e^{i sigma} theta)| over theta in [b/B, B/b].
/// The maximum sits at an endpoint of the theta interval.
double dilatation_bound(const ExtParams& p, DerivBounds bounds);

// ---------------------------------------------------------------------------
// Residuals of the admissibility properties

/// max over grid of |E(f o g)(z) - E(f)(E(g)(z))|.
double homomorphism_residual(const Extension& ext, const RealMap& f, const RealMap& g,
                             const std::vector<HalfPlanePoint>& grid);
double homomorphism_residual(const ExtParams& p, const RealMap& f, const RealMap& g,
                             const std::vector<HalfPlanePoint>& grid);

/// sup over n_samples points x in K of |E_p f(x + iy) - f(x)|.
double boundary_residual(const ExtParams& p, const RealMap& f, Range K, double y,
                         int n_samples = 201);

/// Lipschitz constant C with boundary_residual <= C y for alpha > 0:
/// B + |a| (B - b), from the mean value theorem on each difference.
double boundary_lipschitz_constant(const ExtParams& p, DerivBounds bounds);

/// Symmetric matrix of the second-order operator Tr(A Hess F) annihilating
/// E_{a,alpha} f: a11 = (alpha - a) a, a12 = (2a - alpha)/2, a22 = -1.
struct PDEMatrix {
  double a11, a12, a22;
  static PDEMatrix for_params(const ExtParams& p);
};

/// |Tr(A Hess F)(z)| for F = E_p f, Hessian from centered second differences
/// of step h applied to Re F and Im F together. Requires a C^2 map, h > 0 and
/// z.y > 2h.
double pde_residual(const RealMap& f, const ExtParams& p, const HalfPlanePoint& z, double h);

}  // namespace qcext
