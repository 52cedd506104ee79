#include "qcext/beurling_ahlfors.hpp"

#include "qcext/errors.hpp"
#include "qcext/quadrature.hpp"

namespace qcext {

Complex extend_ba(const RealMap& f, const HalfPlanePoint& z, const BAConfig& cfg) {
  if (!(cfg.quad_tol > 0.0) || !(cfg.im_scale > 0.0)) {
    throw DomainError("BAConfig needs quad_tol > 0 and im_scale > 0");
  }
  if (!(z.y > 0.0)) throw DomainError("extension needs a point with y > 0");
  auto integrand = [&](double t) { return f(z.x + t * z.y); };
  const quad::AdaptiveOptions opts{cfg.quad_tol, 48};
  const double left = quad::integrate(integrand, -1.0, 0.0, opts);
  const double right = quad::integrate(integrand, 0.0, 1.0, opts);
  return {0.5 * (left + right), 0.5 * cfg.im_scale * (right - left)};
}

Extension ba_extension(const BAConfig& cfg) {
  return [cfg](const RealMap& f, const HalfPlanePoint& z) { return extend_ba(f, z, cfg); };
}

double ba_affine_naturality_residual(const RealMap& f, const RealMap& g_affine,
                                     const HalfPlanePoint& z, const BAConfig& cfg) {
  if (g_affine.kind() != MapKind::affine) {
    throw DomainError("affine naturality residual needs an affine inner map");
  }
  const Complex lhs = extend_ba(compose(f, g_affine), z, cfg);
  const Complex inner = extend_ba(g_affine, z, cfg);
  const Complex rhs = extend_ba(f, HalfPlanePoint::from_complex(inner), cfg);
  return std::abs(lhs - rhs);
}

}  // namespace qcext
