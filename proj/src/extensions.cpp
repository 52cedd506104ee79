#include "qcext/extensions.hpp"

#include <string>

#include "qcext/errors.hpp"

namespace qcext {
namespace {

void require_group_element(const ExtParams& g) {
  if (!(g.alpha > 0.0)) {
    throw DomainError("group element needs alpha > 0, got " + std::to_string(g.alpha));
  }
}

}  // namespace

HalfPlanePoint shear(double a, double alpha, const HalfPlanePoint& z) {
  if (!(alpha > 0.0)) throw DomainError("shear needs alpha > 0");
  return {z.x + a * z.y, alpha * z.y};
}

ExtParams group_mul(const ExtParams& g1, const ExtParams& g2) {
  require_group_element(g1);
  require_group_element(g2);
  return {g1.a + g1.alpha * g2.a, g1.alpha * g2.alpha};
}

ExtParams group_inv(const ExtParams& g) {
  require_group_element(g);
  return {-g.a / g.alpha, 1.0 / g.alpha};
}

Complex extend_family(const ExtParams& p, const RealMap& f, const HalfPlanePoint& z) {
  if (!(p.alpha >= 0.0)) throw DomainError("extension needs alpha >= 0");
  if (!(z.y > 0.0)) throw DomainError("extension needs a point with y > 0");
  const double u = z.x + p.a * z.y;
  const double fu = f(u);
  if (p.alpha == 0.0) {
    const double slope = f.deriv(u);
    return {fu - p.a * z.y * slope, z.y * slope};
  }
  // f(u) - f(u - alpha y) divided by alpha: the averaged slope over the chord.
  const double chord = f.increment(u, p.alpha * z.y) / p.alpha;
  return {fu - p.a * chord, chord};
}

Complex extend_ns(const RealMap& f, const HalfPlanePoint& z) {
  return extend_family({1.0, 2.0}, f, z);
}

Extension family_extension(const ExtParams& p) {
  return [p](const RealMap& f, const HalfPlanePoint& z) { return extend_family(p, f, z); };
}

Complex act(const ExtParams& g, const Extension& base, const RealMap& f,
            const HalfPlanePoint& z) {
  require_group_element(g);
  const Complex inner = base(f, shear(g.a, g.alpha, z));
  if (inner.imag() < 0.0) {
    throw DomainError("extension left the closed upper half-plane");
  }
  const ExtParams back = group_inv(g);
  return shear(back.a, back.alpha, HalfPlanePoint::from_complex(inner)).to_complex();
}

Extension acted(const ExtParams& g, Extension base) {
  require_group_element(g);
  return [g, base = std::move(base)](const RealMap& f, const HalfPlanePoint& z) {
    return act(g, base, f, z);
  };
}

}  // namespace qcext
