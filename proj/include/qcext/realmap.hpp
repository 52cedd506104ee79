#pragma once

#include <memory>
#include <string_view>
#include <variant>
#include <vector>

namespace qcext {

/// Certified enclosure [lo, hi] of f' over the whole real line.
struct DerivBounds {
  double lo = 1.0;
  double hi = 1.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// phi(x) = amplitude * p((x - center) / halfwidth), p(t) = (1 - t^2)^3 on
/// [-1, 1] and 0 outside. p is C^2, so phi' is C^1 with compact support.
struct BumpProfile {
  double center = 0.0;
  double halfwidth = 1.0;
  double amplitude = 0.0;

  /// max |p'| over [-1, 1], attained at t = 1/sqrt(5).
  static double max_profile_slope();

  double value(double x) const;
  double deriv(double x) const;
  double second_deriv(double x) const;
  /// ||phi'||_inf = |amplitude| / halfwidth * max|p'|.
  double max_abs_deriv() const;
};

enum class MapKind {
  affine,
  identity_plus_bump,
  power_integral,
  composition,
  tapered,
  sampled_monotone,
  monomial,
};

std::string_view to_string(MapKind kind);

struct MapNode;
class PowerTable;

/// An increasing C^1 map of the real line with certified derivative bounds.
///
/// Maps are immutable values sharing an expression tree; copying is cheap and
/// every operation is safe to call concurrently. The only mutable state lives
/// in the quadrature memo of power-integral maps and is guarded internally.
class RealMap {
 public:
  static RealMap identity();
  /// x -> slope * x + offset; slope must be positive.
  static RealMap affine(double slope, double offset);
  static RealMap identity_plus_bump(const BumpProfile& bump);
  /// x -> x + sum of bumps. Rejected if the certified lower bound is <= 0.
  static RealMap identity_plus_bumps(std::vector<BumpProfile> bumps);
  /// Monotone cubic Hermite interpolant (weighted harmonic-mean slopes) through
  /// strictly increasing samples, continued affinely beyond the end knots.
  static RealMap sampled_monotone(std::vector<double> xs, std::vector<double> ys);
  /// x -> x^degree. An analytic special case for the dilatation and PDE
  /// checks; not bi-Lipschitz for degree > 1 and carries no certified bounds.
  static RealMap monomial(int degree);

  double operator()(double x) const;
  double deriv(double x) const;
  /// Throws DomainError unless is_c2().
  double second_deriv(double x) const;
  /// f(x) - f(x - h), computed without cancellation where the kind allows it.
  double increment(double x, double h) const;

  DerivBounds bounds() const;
  MapKind kind() const;
  bool is_c2() const;
  bool is_bilipschitz() const;

  const MapNode& node() const { return *node_; }

 private:
  explicit RealMap(std::shared_ptr<const MapNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const MapNode> node_;

  friend RealMap make_map(MapNode node);
};

struct AffineParams {
  double slope;
  double offset;
};

struct BumpParams {
  std::vector<BumpProfile> bumps;
};

/// u -> Q_exponent(Q_inner^{-1}(u)) with Q_beta(x) = int_0^x base'(t)^beta dt.
/// inner_exponent = 0 gives the plain power integral of the base map.
struct PowerIntegralParams {
  std::shared_ptr<const PowerTable> outer;
  std::shared_ptr<const PowerTable> inner;
};

struct CompositionParams {
  RealMap outer;
  RealMap inner;
};

/// Id + (base - Id) * psi_T, psi_T a C^2 cutoff: 1 on [-T, T], 0 off [-2T, 2T].
struct TaperParams {
  RealMap base;
  double T;
};

struct SampledParams {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> slopes;
};

struct MonomialParams {
  int degree;
};

using MapParams = std::variant<AffineParams, BumpParams, PowerIntegralParams,
                               CompositionParams, TaperParams, SampledParams,
                               MonomialParams>;

struct MapNode {
  MapParams params;
  DerivBounds bounds;
  bool c2 = false;
  bool bilipschitz = true;
};

/// Memoized Q_beta(x) = int_0^x f'(t)^beta dt for a bi-Lipschitz base map f.
///
/// Integrals over fixed cells of width cell_width() are computed once by
/// adaptive Gauss-Legendre quadrature and cached as prefix sums; a query adds
/// one partial-cell integral. beta = 0 and beta = 1 are evaluated exactly
/// (x and f(x) - f(0)), as is any beta for an affine base.
class PowerTable {
 public:
  PowerTable(RealMap base, double exponent);
  ~PowerTable();
  PowerTable(const PowerTable&) = delete;
  PowerTable& operator=(const PowerTable&) = delete;

  const RealMap& base() const { return base_; }
  double exponent() const { return exponent_; }
  static constexpr double cell_width() { return 0.5; }

  double value(double x) const;
  /// f'(x)^beta.
  double deriv(double x) const;
  /// Certified enclosure of Q_beta'.
  DerivBounds bounds() const;
  /// Q_beta^{-1}(u) by bracketed bisection/Newton.
  double inverse(double u) const;

 private:
  double prefix(long cell) const;
  double cell_integral(long cell) const;

  RealMap base_;
  double exponent_;
  struct Cache;
  std::unique_ptr<Cache> cache_;
};

RealMap compose(const RealMap& outer, const RealMap& inner);

/// Id + (f - Id) * psi_T. Agrees with f on [-T, T] and with Id off [-2T, 2T].
RealMap taper(const RealMap& f, double T);

/// x -> int_0^x f'(t)^alpha dt with bounds [b^alpha, B^alpha] (swapped when
/// alpha < 0).
RealMap power_integral_map(const RealMap& f, double alpha);

/// Reparametrized power integral Q_exponent o Q_inner^{-1}; its derivative
/// at u is f'(x)^(exponent - inner) with x = Q_inner^{-1}(u).
RealMap power_integral_map(std::shared_ptr<const PowerTable> outer,
                           std::shared_ptr<const PowerTable> inner);

/// Returns x with |f(x) - y| <= tol. Bracketing from the certified bounds,
/// bisection down to width 1e-3, then safeguarded Newton; 200 iterations.
/// Throws NonConvergence when the budget runs out.
double invert_at(const RealMap& f, double y, double tol);

// Free-function spellings.
inline double eval(const RealMap& f, double x) { return f(x); }
inline double deriv(const RealMap& f, double x) { return f.deriv(x); }
inline DerivBounds deriv_bounds(const RealMap& f) { return f.bounds(); }

}  // namespace qcext
