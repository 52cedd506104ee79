#include "qcext/douady_earle.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>

#include "qcext/errors.hpp"

namespace qcext {

Complex Mobius::operator()(Complex w) const {
  return std::polar(1.0, phi) * (w - c) / (1.0 - std::conj(c) * w);
}

Mobius Mobius::inverse() const { return {-phi, -c * std::polar(1.0, phi)}; }

double Mobius::lift(double theta) const {
  // zeta - c = zeta (1 - c conj(zeta)); both factors below have positive
  // real part for |c| < 1, so the principal arguments vary continuously.
  const Complex e = std::polar(1.0, theta);
  return phi + theta + std::arg(1.0 - c * std::conj(e)) - std::arg(1.0 - std::conj(c) * e);
}

namespace circle_detail {

struct TrigLift {
  double shift;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

struct Composed {
  CircleMap outer;
  CircleMap inner;
};

}  // namespace circle_detail

using circle_detail::Composed;
using circle_detail::TrigLift;

struct CircleMap::Node {
  std::variant<TrigLift, Mobius, Composed> lift;
};

CircleMap CircleMap::identity() { return rotation(0.0); }

CircleMap CircleMap::rotation(double phi) { return trig(phi, {}, {}); }

CircleMap CircleMap::trig(double shift, std::vector<double> cos_coeffs,
                          std::vector<double> sin_coeffs) {
  const std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  cos_coeffs.resize(n, 0.0);
  sin_coeffs.resize(n, 0.0);
  double slope_budget = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    slope_budget += static_cast<double>(k + 1) * std::hypot(cos_coeffs[k], sin_coeffs[k]);
  }
  if (!(slope_budget < 1.0)) {
    throw DomainError("circle map perturbation is not certifiably monotone (sum k|c_k| = " +
                      std::to_string(slope_budget) + ")");
  }
  return CircleMap(std::make_shared<const Node>(
      Node{TrigLift{shift, std::move(cos_coeffs), std::move(sin_coeffs)}}));
}

CircleMap CircleMap::mobius(const Mobius& m) {
  if (!(std::abs(m.c) < 1.0)) throw DomainError("Mobius center must lie in the disk");
  return CircleMap(std::make_shared<const Node>(Node{m}));
}

CircleMap compose(const CircleMap& outer, const CircleMap& inner) {
  return CircleMap(std::make_shared<const CircleMap::Node>(CircleMap::Node{Composed{outer, inner}}));
}

double CircleMap::lift(double theta) const {
  struct Visitor {
    double theta;
    double operator()(const TrigLift& t) const {
      double v = theta + t.shift;
      for (std::size_t k = 0; k < t.cos_coeffs.size(); ++k) {
        const double kt = static_cast<double>(k + 1) * theta;
        v += t.cos_coeffs[k] * std::cos(kt) + t.sin_coeffs[k] * std::sin(kt);
      }
      return v;
    }
    double operator()(const Mobius& m) const { return m.lift(theta); }
    double operator()(const Composed& c) const { return c.outer.lift(c.inner.lift(theta)); }
  };
  return std::visit(Visitor{theta}, node_->lift);
}

namespace {

void require_in_disk(Complex w, const char* what) {
  if (!(std::abs(w) < 1.0)) throw DomainError(std::string(what) + " must satisfy |.| < 1");
}

// Boundary samples f(zeta_j) and Poisson-type weights |d zeta| / |zeta_j - z|^2.
struct Samples {
  std::vector<Complex> values;
  std::vector<double> weights;
};

Samples sample(const CircleMap& f, Complex z, int n_nodes) {
  Samples s;
  s.values.resize(n_nodes);
  s.weights.resize(n_nodes);
  const double step = 2.0 * std::numbers::pi / n_nodes;
  for (int j = 0; j < n_nodes; ++j) {
    const double theta = step * j;
    s.values[j] = f.at(theta);
    s.weights[j] = step / std::norm(std::polar(1.0, theta) - z);
  }
  return s;
}

Complex defect(const Samples& s, Complex w) {
  Complex sum{0.0, 0.0};
  const Complex wc = std::conj(w);
  for (std::size_t j = 0; j < s.values.size(); ++j) {
    sum += s.weights[j] * (w - s.values[j]) / (1.0 - wc * s.values[j]);
  }
  return sum;
}

}  // namespace

Complex de_defect(const CircleMap& f, Complex w, Complex z, int n_nodes) {
  if (n_nodes < 16) throw DomainError("de_defect needs at least 16 nodes");
  require_in_disk(w, "w");
  require_in_disk(z, "z");
  return defect(sample(f, z, n_nodes), w);
}

DESolution solve_de(const CircleMap& f, Complex z, double tol, int n_nodes) {
  if (!(tol > 0.0)) throw DomainError("solve_de needs tol > 0");
  if (n_nodes < 16) throw DomainError("solve_de needs at least 16 nodes");
  require_in_disk(z, "z");
  constexpr int kMaxIter = 50;
  constexpr double kJacobianStep = 1e-7;
  constexpr int kMaxHalvings = 40;

  const Samples s = sample(f, z, n_nodes);

  Complex w{0.0, 0.0};
  double total = 0.0;
  for (std::size_t j = 0; j < s.values.size(); ++j) {
    w += s.weights[j] * s.values[j];
    total += s.weights[j];
  }
  w /= total;
  // Below this the summed defect is dominated by rounding in the quadrature.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * total;
  const double target = std::max(tol, floor);

  Complex r = defect(s, w);
  int iter = 0;
  while (std::abs(r) > target) {
    if (iter >= kMaxIter) {
      throw NonConvergence("Douady-Earle solve: defect " + std::to_string(std::abs(r)) +
                           " after " + std::to_string(kMaxIter) + " iterations");
    }
    ++iter;
    // Centered finite-difference Jacobian of (Re r, Im r) in (Re w, Im w).
    const Complex dx = (defect(s, w + kJacobianStep) - defect(s, w - kJacobianStep)) /
                       (2.0 * kJacobianStep);
    const Complex dy = (defect(s, w + Complex(0, kJacobianStep)) -
                        defect(s, w - Complex(0, kJacobianStep))) /
                       (2.0 * kJacobianStep);
    const double det = dx.real() * dy.imag() - dy.real() * dx.imag();
    if (!(std::abs(det) > 0.0)) throw NonConvergence("Douady-Earle solve: singular Jacobian");
    const double su = -(dy.imag() * r.real() - dy.real() * r.imag()) / det;
    const double sv = -(-dx.imag() * r.real() + dx.real() * r.imag()) / det;
    const Complex step{su, sv};

    double lambda = 1.0;
    bool stayed_inside = false;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h, lambda *= 0.5) {
      const Complex trial = w + lambda * step;
      if (!(std::abs(trial) < 1.0)) continue;
      stayed_inside = true;
      const Complex rt = defect(s, trial);
      if (std::abs(rt) < std::abs(r)) {
        w = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!stayed_inside) throw StepOutOfDisk("Douady-Earle solve: damping could not keep |w| < 1");
    if (!accepted) {
      throw NonConvergence("Douady-Earle solve stalled at defect " + std::to_string(std::abs(r)));
    }
  }
  return {w, iter, std::abs(de_defect(f, w, z, n_nodes))};
}

double de_naturality_residual(const CircleMap& f, const Mobius& m, Complex z,
                              Naturality side, double tol, int n_nodes) {
  const CircleMap mm = CircleMap::mobius(m);
  if (side == Naturality::post_composition) {
    return std::abs(extend_de(compose(mm, f), z, tol, n_nodes) - m(extend_de(f, z, tol, n_nodes)));
  }
  return std::abs(extend_de(compose(f, mm), z, tol, n_nodes) - extend_de(f, m(z), tol, n_nodes));
}

}  // namespace qcext
