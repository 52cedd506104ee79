#include "qcext/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qcext/errors.hpp"

namespace qcext {

void GridSpec::validate() const {
  if (!(y_min > 0.0)) throw DomainError("grid needs y_min > 0");
  if (!(y_max >= y_min) || !(x_max >= x_min)) throw DomainError("grid ranges are inverted");
  if (nx < 2 || ny < 2) throw DomainError("grid needs nx, ny >= 2");
}

std::vector<HalfPlanePoint> GridSpec::points() const {
  validate();
  std::vector<HalfPlanePoint> pts;
  pts.reserve(static_cast<std::size_t>(nx) * ny);
  const double log_lo = std::log(y_min);
  const double log_hi = std::log(y_max);
  for (int j = 0; j < ny; ++j) {
    const double y = j == ny - 1 ? y_max : std::exp(log_lo + (log_hi - log_lo) * j / (ny - 1));
    for (int i = 0; i < nx; ++i) {
      const double x = x_min + (x_max - x_min) * i / (nx - 1);
      pts.push_back({x, j == 0 ? y_min : y});
    }
  }
  return pts;
}

double m_ratio(const RealMap& f, double x, double t) {
  if (!(t > 0.0)) throw DomainError("m_ratio needs t > 0");
  const double fx = f(x);
  const double up = f(x + t) - fx;
  const double down = fx - f(x - t);
  if (!(down > 0.0) || !(up > 0.0)) {
    throw DomainError("m_ratio: map is not increasing near x = " + std::to_string(x));
  }
  return up / down;
}

double estimate_m(const RealMap& f, Range x_range, Range t_range, int grid_n) {
  if (grid_n < 2) throw DomainError("estimate_m needs grid_n >= 2");
  if (!(t_range.lo > 0.0) || t_range.hi < t_range.lo || x_range.hi < x_range.lo) {
    throw DomainError("estimate_m needs nonempty ranges with t > 0");
  }
  double best = 1.0;
  for (int i = 0; i < grid_n; ++i) {
    const double x = x_range.lo + (x_range.hi - x_range.lo) * i / (grid_n - 1);
    for (int j = 0; j < grid_n; ++j) {
      const double t = t_range.lo + (t_range.hi - t_range.lo) * j / (grid_n - 1);
      const double r = m_ratio(f, x, t);
      best = std::max({best, r, 1.0 / r});
    }
  }
  return best;
}

Complex sigma_factor(const ExtParams& p) {
  if (!(p.alpha >= 0.0)) throw DomainError("sigma_factor needs alpha >= 0");
  const Complex i{0.0, 1.0};
  return ((-i + p.a) * (i + p.a - p.alpha)) / ((i + p.a) * (-i + p.a - p.alpha));
}

namespace {

struct Theta {
  double value;
  double fu;  // f' at x + a y
};

Theta chord_ratio(const RealMap& f, const ExtParams& p, const HalfPlanePoint& z) {
  const double fu = f.deriv(z.x + p.a * z.y);
  const double fv = f.deriv(z.x - (p.alpha - p.a) * z.y);
  if (!(fu >= 0.0) || !(fv >= 0.0) || (fu == 0.0 && fv == 0.0)) {
    throw DomainError("dilatation: f' is not positive at the sample points");
  }
  return {fu == 0.0 ? std::numeric_limits<double>::infinity() : fv / fu, fu};
}

void require_upper(const HalfPlanePoint& z) {
  if (!(z.y > 0.0)) throw DomainError("dilatation needs y > 0");
}

}  // namespace

Complex beltrami_analytic(const RealMap& f, const ExtParams& p, const HalfPlanePoint& z) {
  require_upper(z);
  if (!(p.alpha >= 0.0)) throw DomainError("dilatation needs alpha >= 0");
  const Complex i{0.0, 1.0};
  if (p.alpha == 0.0) {
    const double u = z.x + p.a * z.y;
    const double f1 = f.deriv(u);
    if (!(f1 > 0.0)) throw DomainError("dilatation: f' is not positive");
    const double f2 = f.second_deriv(u);
    return z.y * f2 * Complex(-2.0 * p.a, 1.0 - p.a * p.a) /
           (2.0 * f1 + i * (1.0 + p.a * p.a) * z.y * f2);
  }
  const Theta th = chord_ratio(f, p, z);
  const double s = p.a * p.alpha - p.a * p.a;
  const Complex k_bar{p.alpha - 2.0 * p.a, s + 1.0};
  const Complex k_z{p.alpha, 1.0 - s};
  if (std::isinf(th.value)) return (k_bar / k_z) / sigma_factor(p);  // theta -> infinity
  return (k_bar / k_z) * (1.0 - th.value) / (1.0 - sigma_factor(p) * th.value);
}

DilatationReport dilatation_analytic(const RealMap& f, const ExtParams& p,
                                     const HalfPlanePoint& z) {
  require_upper(z);
  if (!(p.alpha > 0.0)) throw DomainError("dilatation_analytic needs alpha > 0");
  DilatationReport r;
  r.z = z;
  r.theta = chord_ratio(f, p, z).value;
  r.sigma_factor = sigma_factor(p);
  r.analytic = std::isinf(r.theta)
                   ? 1.0 / std::abs(r.sigma_factor)
                   : std::abs((1.0 - r.theta) / (1.0 - r.sigma_factor * r.theta));
  r.numeric = std::numeric_limits<double>::quiet_NaN();
  r.gap = std::numeric_limits<double>::quiet_NaN();
  return r;
}

Complex beltrami_numeric(const PlaneMap& F, const HalfPlanePoint& z, double h) {
  if (!(h > 0.0) || !(z.y > 2.0 * h)) throw DomainError("beltrami_numeric needs 0 < 2h < y");
  const Complex fx = (F({z.x + h, z.y}) - F({z.x - h, z.y})) / (2.0 * h);
  const Complex fy = (F({z.x, z.y + h}) - F({z.x, z.y - h})) / (2.0 * h);
  const Complex i{0.0, 1.0};
  const Complex dbar = 0.5 * (fx + i * fy);
  const Complex d = 0.5 * (fx - i * fy);
  if (std::abs(d) < 1e-12) throw DomainError("beltrami_numeric: degenerate dF");
  return dbar / d;
}

DilatationReport dilatation_report(const RealMap& f, const ExtParams& p,
                                   const HalfPlanePoint& z, double h) {
  DilatationReport r = dilatation_analytic(f, p, z);
  r.numeric = dilatation_numeric(
      [&](const HalfPlanePoint& w) { return extend_family(p, f, w); }, z, h);
  r.gap = r.numeric - r.analytic;
  return r;
}

double sup_dilatation(const RealMap& f, const ExtParams& p,
                      const std::vector<HalfPlanePoint>& grid) {
  if (grid.empty()) throw DomainError("sup_dilatation needs a nonempty grid");
  double best = 0.0;
  for (const auto& z : grid) best = std::max(best, std::abs(beltrami_analytic(f, p, z)));
  return best;
}

double dilatation_bound(const ExtParams& p, DerivBounds bounds) {
  if (!(bounds.lo > 0.0) || !std::isfinite(bounds.hi)) {
    throw DomainError("dilatation_bound needs finite positive derivative bounds");
  }
  const double theta = bounds.hi / bounds.lo;
  const Complex e = sigma_factor(p);
  // |1 - theta|/|1 - e theta| is invariant under theta -> 1/theta and
  // increasing for theta > 1.
  return std::abs((1.0 - theta) / (1.0 - e * theta));
}

double homomorphism_residual(const Extension& ext, const RealMap& f, const RealMap& g,
                             const std::vector<HalfPlanePoint>& grid) {
  const RealMap fg = compose(f, g);
  double worst = 0.0;
  for (const auto& z : grid) {
    const Complex w = ext(g, z);
    const Complex lhs = ext(fg, z);
    const Complex rhs = ext(f, HalfPlanePoint::from_complex(w));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double homomorphism_residual(const ExtParams& p, const RealMap& f, const RealMap& g,
                             const std::vector<HalfPlanePoint>& grid) {
  if (!(p.alpha > 0.0)) throw DomainError("homomorphism_residual needs alpha > 0");
  return homomorphism_residual(family_extension(p), f, g, grid);
}

double boundary_residual(const ExtParams& p, const RealMap& f, Range K, double y,
                         int n_samples) {
  if (!(y > 0.0)) throw DomainError("boundary_residual needs y > 0");
  if (n_samples < 2 || K.hi < K.lo) throw DomainError("boundary_residual needs a sampled interval");
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double x = K.lo + (K.hi - K.lo) * i / (n_samples - 1);
    worst = std::max(worst, std::abs(extend_family(p, f, {x, y}) - Complex(f(x), 0.0)));
  }
  return worst;
}

double boundary_lipschitz_constant(const ExtParams& p, DerivBounds bounds) {
  if (!(p.alpha > 0.0)) throw DomainError("boundary constant needs alpha > 0");
  return bounds.hi + std::abs(p.a) * (bounds.hi - bounds.lo);
}

PDEMatrix PDEMatrix::for_params(const ExtParams& p) {
  return {(p.alpha - p.a) * p.a, 0.5 * (2.0 * p.a - p.alpha), -1.0};
}

double pde_residual(const RealMap& f, const ExtParams& p, const HalfPlanePoint& z, double h) {
  if (!f.is_c2()) throw DomainError("pde_residual needs a C^2 map");
  if (!(h > 0.0) || !(z.y > 2.0 * h)) throw DomainError("pde_residual needs 0 < 2h < y");
  auto F = [&](double dx, double dy) { return extend_family(p, f, {z.x + dx, z.y + dy}); };
  const Complex c = F(0, 0);
  const double h2 = h * h;
  const Complex fxx = (F(h, 0) - 2.0 * c + F(-h, 0)) / h2;
  const Complex fyy = (F(0, h) - 2.0 * c + F(0, -h)) / h2;
  const Complex fxy = (F(h, h) - F(h, -h) - F(-h, h) + F(-h, -h)) / (4.0 * h2);
  const PDEMatrix A = PDEMatrix::for_params(p);
  return std::abs(A.a11 * fxx + 2.0 * A.a12 * fxy + A.a22 * fyy);
}

}  // namespace qcext
