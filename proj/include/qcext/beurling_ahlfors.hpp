#pragma once

#include "qcext/extensions.hpp"

namespace qcext {

/// im_scale multiplies the imaginary part. With im_scale = 1 the extension is
///   1/2 int_{-1}^{1} f(x+ty) dt + (i/2) int_{-1}^{1} f(x+ty) sgn(t) dt,
/// which sends the identity to x + iy/2. im_scale = 2 (the default) makes the
/// operator fix affine maps and commute with affine pre-composition.
struct BAConfig {
  double quad_tol = 1e-10;
  double im_scale = 2.0;
};

/// Beurling-Ahlfors extension by adaptive Gauss-Legendre quadrature, split at
/// t = 0 where the sgn weight jumps.
Complex extend_ba(const RealMap& f, const HalfPlanePoint& z, const BAConfig& cfg = {});

Extension ba_extension(const BAConfig& cfg = {});

/// |E_AB(f o g)(z) - E_AB(f)(E_AB(g)(z))| for affine g.
double ba_affine_naturality_residual(const RealMap& f, const RealMap& g_affine,
                                     const HalfPlanePoint& z, const BAConfig& cfg = {});

}  // namespace qcext
