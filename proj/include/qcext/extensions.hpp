#pragma once

#include <complex>
#include <functional>

#include "qcext/realmap.hpp"

namespace qcext {

using Complex = std::complex<double>;

/// A point x + iy of the upper half-plane. Extension operators require
/// y > 0; shears accept the closed half-plane so boundary values pass through.
struct HalfPlanePoint {
  double x = 0.0;
  double y = 1.0;

  Complex to_complex() const { return {x, y}; }
  static HalfPlanePoint from_complex(Complex z) { return {z.real(), z.imag()}; }
};

/// (a, alpha) with alpha >= 0. For alpha > 0 this is also an element of the
/// affine group G with (a, alpha) . (b, beta) = (a + alpha b, alpha beta).
struct ExtParams {
  double a = 0.0;
  double alpha = 1.0;

  friend bool operator==(const ExtParams&, const ExtParams&) = default;
};

/// Any boundary-extension operator, evaluated pointwise.
using Extension = std::function<Complex(const RealMap&, const HalfPlanePoint&)>;

/// S_a^alpha(x + iy) = (x + a y) + i alpha y. DomainError if alpha <= 0.
HalfPlanePoint shear(double a, double alpha, const HalfPlanePoint& z);

ExtParams group_mul(const ExtParams& g1, const ExtParams& g2);
ExtParams group_inv(const ExtParams& g);
inline ExtParams group_identity() { return {0.0, 1.0}; }

/// The two-parameter family E_{a,alpha} f(z):
///   alpha > 0: (1 - a/alpha) f(x+ay) + (a/alpha) f(x-(alpha-a)y)
///              + (i/alpha) [f(x+ay) - f(x-(alpha-a)y)]
///   alpha = 0: f(x+ay) - a y f'(x+ay) + i y f'(x+ay)
/// The bracketed difference is taken through RealMap::increment, so affine
/// inputs are reproduced to rounding even for tiny alpha.
Complex extend_family(const ExtParams& p, const RealMap& f, const HalfPlanePoint& z);

/// Norton-Sullivan extension, the (1, 2) member of the family.
Complex extend_ns(const RealMap& f, const HalfPlanePoint& z);

/// The family member as an Extension callable.
Extension family_extension(const ExtParams& p);

/// (a, alpha) E f (z) = S_{-a/alpha}^{1/alpha}( E f ( S_a^alpha z ) ).
/// Throws DomainError if g.alpha <= 0 or E leaves the closed upper half-plane.
Complex act(const ExtParams& g, const Extension& base, const RealMap& f,
            const HalfPlanePoint& z);

/// The acted-upon extension g E as a callable, so actions can be nested.
Extension acted(const ExtParams& g, Extension base);

}  // namespace qcext
