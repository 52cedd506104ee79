#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace qcext {

using Complex = std::complex<double>;

/// Disk automorphism w -> e^{i phi} (w - c) / (1 - conj(c) w), |c| < 1.
struct Mobius {
  double phi = 0.0;
  Complex c{0.0, 0.0};

  Complex operator()(Complex w) const;
  Mobius inverse() const;
  /// Continuous lift of the boundary map: m(e^{i theta}) = e^{i lift(theta)}.
  double lift(double theta) const;
};

/// Orientation-preserving circle homeomorphism, stored through its lift
/// Theta with Theta(theta + 2 pi) = Theta(theta) + 2 pi.
class CircleMap {
 public:
  static CircleMap identity();
  static CircleMap rotation(double phi);
  /// Theta(theta) = theta + shift + sum_k cos_k cos(k theta) + sin_k sin(k theta),
  /// k = 1, 2, ... Rejected unless sum_k k |(cos_k, sin_k)| < 1, which
  /// certifies Theta' > 0.
  static CircleMap trig(double shift, std::vector<double> cos_coeffs,
                        std::vector<double> sin_coeffs);
  static CircleMap mobius(const Mobius& m);

  double lift(double theta) const;
  /// Boundary value at e^{i theta}.
  Complex at(double theta) const { return std::polar(1.0, lift(theta)); }

  friend CircleMap compose(const CircleMap& outer, const CircleMap& inner);

  struct Node;

 private:
  explicit CircleMap(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

CircleMap compose(const CircleMap& outer, const CircleMap& inner);

/// Periodic trapezoidal rule for
///   int_{S^1} (w - f(zeta)) / (1 - conj(w) f(zeta)) |d zeta| / |zeta - z|^2.
/// Needs n_nodes >= 16 and |w|, |z| < 1.
Complex de_defect(const CircleMap& f, Complex w, Complex z, int n_nodes);

struct DESolution {
  Complex w;
  int iterations = 0;
  double defect = 0.0;  // |de_defect| re-evaluated at w
};

/// Douady-Earle (barycentric) extension: solves de_defect = 0 for w by damped
/// Newton with a finite-difference Jacobian, seeded at the Poisson-weighted
/// barycenter of the boundary values. Budget 50 iterations. The target is
/// max(tol, 64 eps sum_j w_j), the rounding floor of the weighted sum; it only
/// exceeds 1e-12 when |z| is close to 1.
DESolution solve_de(const CircleMap& f, Complex z, double tol = 1e-12, int n_nodes = 512);

inline Complex extend_de(const CircleMap& f, Complex z, double tol = 1e-12,
                         int n_nodes = 512) {
  return solve_de(f, z, tol, n_nodes).w;
}

enum class Naturality { post_composition, pre_composition };

/// post: |E(m o f)(z) - m(E f (z))|;  pre: |E(f o m)(z) - E f (m(z))|.
double de_naturality_residual(const CircleMap& f, const Mobius& m, Complex z,
                              Naturality side, double tol = 1e-12, int n_nodes = 512);

}  // namespace qcext
