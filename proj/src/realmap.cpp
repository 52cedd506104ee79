#include "qcext/realmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "qcext/errors.hpp"
#include "qcext/quadrature.hpp"
#include "qcext/roots.hpp"

namespace qcext {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

RealMap make_map(MapNode node) {
  return RealMap(std::make_shared<const MapNode>(std::move(node)));
}

// ---------------------------------------------------------------------------
// Bumps

double BumpProfile::max_profile_slope() {
  // p'(t) = -6 t (1 - t^2)^2, p''(t) = 0 at t^2 = 1/5.
  static const double m = 96.0 / (25.0 * std::sqrt(5.0));
  return m;
}

double BumpProfile::value(double x) const {
  const double t = (x - center) / halfwidth;
  if (std::abs(t) >= 1.0) return 0.0;
  const double s = 1.0 - t * t;
  return amplitude * s * s * s;
}

double BumpProfile::deriv(double x) const {
  const double t = (x - center) / halfwidth;
  if (std::abs(t) >= 1.0) return 0.0;
  const double s = 1.0 - t * t;
  return amplitude * (-6.0 * t * s * s) / halfwidth;
}

double BumpProfile::second_deriv(double x) const {
  const double t = (x - center) / halfwidth;
  if (std::abs(t) >= 1.0) return 0.0;
  const double s = 1.0 - t * t;
  return amplitude * s * (30.0 * t * t - 6.0) / (halfwidth * halfwidth);
}

double BumpProfile::max_abs_deriv() const {
  return std::abs(amplitude) / halfwidth * max_profile_slope();
}

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::affine: return "affine";
    case MapKind::identity_plus_bump: return "identity_plus_bump";
    case MapKind::power_integral: return "power_integral";
    case MapKind::composition: return "composition";
    case MapKind::tapered: return "tapered";
    case MapKind::sampled_monotone: return "sampled_monotone";
    case MapKind::monomial: return "monomial";
  }
  return "unknown";
}

namespace {

// C^2 smoothstep on [0, 1]: s = u^3 (10 - 15u + 6u^2).
double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep_d(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }
double smoothstep_dd(double u) { return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u); }
constexpr double kSmoothstepMaxSlope = 15.0 / 8.0;

struct Cutoff {
  double value, d1, d2;
};

// psi_T and its first two derivatives.
Cutoff cutoff(double x, double T) {
  const double ax = std::abs(x);
  if (ax <= T) return {1.0, 0.0, 0.0};
  if (ax >= 2.0 * T) return {0.0, 0.0, 0.0};
  const double u = (2.0 * T - ax) / T;
  const double sign = x > 0 ? 1.0 : -1.0;
  return {smoothstep(u), -sign * smoothstep_d(u) / T, smoothstep_dd(u) / (T * T)};
}

// Hermite segment lookup for sampled maps. Returns the segment index, or -1
// / n-1 for the affine continuations.
long find_segment(const SampledParams& s, double x) {
  const auto it = std::upper_bound(s.xs.begin(), s.xs.end(), x);
  return static_cast<long>(it - s.xs.begin()) - 1;
}

double sampled_eval(const SampledParams& s, double x) {
  const long n = static_cast<long>(s.xs.size());
  if (x <= s.xs.front()) return s.ys.front() + s.slopes.front() * (x - s.xs.front());
  if (x >= s.xs.back()) return s.ys.back() + s.slopes.back() * (x - s.xs.back());
  const long i = std::min(find_segment(s, x), n - 2);
  const double h = s.xs[i + 1] - s.xs[i];
  const double t = (x - s.xs[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * s.ys[i] + (t3 - 2 * t2 + t) * h * s.slopes[i] +
         (-2 * t3 + 3 * t2) * s.ys[i + 1] + (t3 - t2) * h * s.slopes[i + 1];
}

// Derivative on a segment as a quadratic c0 + c1 t + c2 t^2 in t in [0, 1].
struct Quadratic {
  double c0, c1, c2;
  double at(double t) const { return c0 + t * (c1 + t * c2); }
};

Quadratic segment_deriv(const SampledParams& s, long i) {
  const double h = s.xs[i + 1] - s.xs[i];
  const double delta = (s.ys[i + 1] - s.ys[i]) / h;
  const double m0 = s.slopes[i];
  const double m1 = s.slopes[i + 1];
  return {m0, 6.0 * delta - 4.0 * m0 - 2.0 * m1, -6.0 * delta + 3.0 * m0 + 3.0 * m1};
}

double sampled_deriv(const SampledParams& s, double x) {
  const long n = static_cast<long>(s.xs.size());
  if (x <= s.xs.front()) return s.slopes.front();
  if (x >= s.xs.back()) return s.slopes.back();
  const long i = std::min(find_segment(s, x), n - 2);
  const double t = (x - s.xs[i]) / (s.xs[i + 1] - s.xs[i]);
  return segment_deriv(s, i).at(t);
}

DerivBounds interval_product(DerivBounds a, DerivBounds b) {
  return {a.lo * b.lo, a.hi * b.hi};
}

DerivBounds interval_power(DerivBounds a, double p) {
  const double lo = std::pow(a.lo, p);
  const double hi = std::pow(a.hi, p);
  return p >= 0 ? DerivBounds{lo, hi} : DerivBounds{hi, lo};
}

void require_bilipschitz(const RealMap& f, const char* what) {
  if (!f.is_bilipschitz()) {
    throw DomainError(std::string(what) + " requires a bi-Lipschitz map");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Constructors

RealMap RealMap::identity() { return affine(1.0, 0.0); }

RealMap RealMap::affine(double slope, double offset) {
  if (!(slope > 0.0) || !std::isfinite(slope) || !std::isfinite(offset)) {
    throw DomainError("affine map needs a finite positive slope");
  }
  return make_map({AffineParams{slope, offset}, {slope, slope}, true, true});
}

RealMap RealMap::identity_plus_bump(const BumpProfile& bump) {
  return identity_plus_bumps({bump});
}

RealMap RealMap::identity_plus_bumps(std::vector<BumpProfile> bumps) {
  double spread = 0.0;
  for (const auto& b : bumps) {
    if (!(b.halfwidth > 0.0) || !std::isfinite(b.center) || !std::isfinite(b.amplitude)) {
      throw DomainError("bump needs a positive halfwidth and finite parameters");
    }
    spread += b.max_abs_deriv();
  }
  const DerivBounds bounds{1.0 - spread, 1.0 + spread};
  if (!(bounds.lo > 0.0)) {
    throw DomainError("bump perturbation is not increasing: certified f' lower bound " +
                      std::to_string(bounds.lo));
  }
  return make_map({BumpParams{std::move(bumps)}, bounds, true, true});
}

RealMap RealMap::sampled_monotone(std::vector<double> xs, std::vector<double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) {
    throw DomainError("sampled map needs at least two (x, y) pairs of equal length");
  }
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = xs[i + 1] - xs[i];
    if (!(h > 0.0) || !(ys[i + 1] > ys[i])) {
      throw DomainError("sampled map needs strictly increasing xs and ys");
    }
    delta[i] = (ys[i + 1] - ys[i]) / h;
  }
  std::vector<double> m(n);
  m.front() = delta.front();
  m.back() = delta.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = xs[i] - xs[i - 1];
    const double h1 = xs[i + 1] - xs[i];
    const double w1 = 2.0 * h1 + h0;
    const double w2 = h1 + 2.0 * h0;
    m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
  }
  SampledParams params{std::move(xs), std::move(ys), std::move(m)};
  DerivBounds bounds{params.slopes.front(), params.slopes.front()};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Quadratic q = segment_deriv(params, static_cast<long>(i));
    for (double t : {0.0, 1.0}) {
      bounds.lo = std::min(bounds.lo, q.at(t));
      bounds.hi = std::max(bounds.hi, q.at(t));
    }
    if (q.c2 != 0.0) {
      const double tv = -q.c1 / (2.0 * q.c2);
      if (tv > 0.0 && tv < 1.0) {
        bounds.lo = std::min(bounds.lo, q.at(tv));
        bounds.hi = std::max(bounds.hi, q.at(tv));
      }
    }
  }
  if (!(bounds.lo > 0.0)) {
    throw DomainError("sampled map derivative touches zero");
  }
  return make_map({std::move(params), bounds, false, true});
}

RealMap RealMap::monomial(int degree) {
  if (degree < 1) throw DomainError("monomial degree must be >= 1");
  if (degree == 1) return identity();
  const double inf = std::numeric_limits<double>::infinity();
  return make_map({MonomialParams{degree}, {0.0, inf}, true, false});
}

RealMap compose(const RealMap& outer, const RealMap& inner) {
  const DerivBounds bounds = interval_product(outer.bounds(), inner.bounds());
  const bool bilip = outer.is_bilipschitz() && inner.is_bilipschitz();
  if (bilip && !(bounds.lo > 0.0)) {
    throw DomainError("composition lost its positive derivative bound");
  }
  return make_map({CompositionParams{outer, inner}, bounds,
                   outer.is_c2() && inner.is_c2(), bilip});
}

RealMap taper(const RealMap& f, double T) {
  if (!(T > 0.0)) throw DomainError("taper needs T > 0");
  require_bilipschitz(f, "taper");
  const DerivBounds fb = f.bounds();
  // sup |f(x) - x| over T <= |x| <= 2T: sampled values plus the slope of
  // f - Id times the half spacing, which bounds the excursion between samples.
  constexpr int kPanels = 256;
  const double drift = std::max(std::abs(fb.lo - 1.0), std::abs(fb.hi - 1.0));
  const double step = T / kPanels;
  double sampled = 0.0;
  for (int i = 0; i <= kPanels; ++i) {
    const double x = T + step * i;
    sampled = std::max({sampled, std::abs(f(x) - x), std::abs(f(-x) + x)});
  }
  const double excursion = sampled + 0.5 * step * drift;
  const double cut_slope = kSmoothstepMaxSlope / T;
  const DerivBounds bounds{1.0 + std::min(0.0, fb.lo - 1.0) - excursion * cut_slope,
                           1.0 + std::max(0.0, fb.hi - 1.0) + excursion * cut_slope};
  if (!(bounds.lo > 0.0)) {
    throw DomainError("tapered map is not certifiably increasing (lower bound " +
                      std::to_string(bounds.lo) + ")");
  }
  return make_map({TaperParams{f, T}, bounds, f.is_c2(), true});
}

RealMap power_integral_map(const RealMap& f, double alpha) {
  return power_integral_map(std::make_shared<const PowerTable>(f, alpha),
                            std::make_shared<const PowerTable>(f, 0.0));
}

RealMap power_integral_map(std::shared_ptr<const PowerTable> outer,
                           std::shared_ptr<const PowerTable> inner) {
  if (!outer || !inner) throw DomainError("power integral needs both tables");
  const double rel = outer->exponent() - inner->exponent();
  const DerivBounds bounds = interval_power(outer->base().bounds(), rel);
  const bool c2 = outer->base().is_c2() && inner->base().is_c2();
  return make_map({PowerIntegralParams{std::move(outer), std::move(inner)}, bounds, c2, true});
}

// ---------------------------------------------------------------------------
// Evaluation

double RealMap::operator()(double x) const {
  return std::visit(
      overloaded{
          [&](const AffineParams& p) { return p.slope * x + p.offset; },
          [&](const BumpParams& p) {
            double v = x;
            for (const auto& b : p.bumps) v += b.value(x);
            return v;
          },
          [&](const PowerIntegralParams& p) {
            if (p.inner->exponent() == 0.0) return p.outer->value(x);
            return p.outer->value(p.inner->inverse(x));
          },
          [&](const CompositionParams& p) { return p.outer(p.inner(x)); },
          [&](const TaperParams& p) {
            const double ax = std::abs(x);
            if (ax <= p.T) return p.base(x);
            if (ax >= 2.0 * p.T) return x;
            return x + (p.base(x) - x) * cutoff(x, p.T).value;
          },
          [&](const SampledParams& p) { return sampled_eval(p, x); },
          [&](const MonomialParams& p) { return std::pow(x, p.degree); },
      },
      node_->params);
}

double RealMap::deriv(double x) const {
  return std::visit(
      overloaded{
          [&](const AffineParams& p) { return p.slope; },
          [&](const BumpParams& p) {
            double v = 1.0;
            for (const auto& b : p.bumps) v += b.deriv(x);
            return v;
          },
          [&](const PowerIntegralParams& p) {
            const double t = p.inner->exponent() == 0.0 ? x : p.inner->inverse(x);
            const double rel = p.outer->exponent() - p.inner->exponent();
            return std::pow(p.outer->base().deriv(t), rel);
          },
          [&](const CompositionParams& p) { return p.outer.deriv(p.inner(x)) * p.inner.deriv(x); },
          [&](const TaperParams& p) {
            const double ax = std::abs(x);
            if (ax <= p.T) return p.base.deriv(x);
            if (ax >= 2.0 * p.T) return 1.0;
            const Cutoff c = cutoff(x, p.T);
            return 1.0 + (p.base.deriv(x) - 1.0) * c.value + (p.base(x) - x) * c.d1;
          },
          [&](const SampledParams& p) { return sampled_deriv(p, x); },
          [&](const MonomialParams& p) { return p.degree * std::pow(x, p.degree - 1); },
      },
      node_->params);
}

double RealMap::second_deriv(double x) const {
  if (!is_c2()) {
    throw DomainError(std::string("map of kind ") + std::string(to_string(kind())) +
                      " is not flagged C^2");
  }
  return std::visit(
      overloaded{
          [&](const AffineParams&) { return 0.0; },
          [&](const BumpParams& p) {
            double v = 0.0;
            for (const auto& b : p.bumps) v += b.second_deriv(x);
            return v;
          },
          [&](const PowerIntegralParams& p) {
            // d/du f'(t)^r with t = Q_inner^{-1}(u), dt/du = f'(t)^(-inner).
            const RealMap& f = p.outer->base();
            const double t = p.inner->exponent() == 0.0 ? x : p.inner->inverse(x);
            const double rel = p.outer->exponent() - p.inner->exponent();
            const double fp = f.deriv(t);
            return rel * std::pow(fp, rel - 1.0) * f.second_deriv(t) *
                   std::pow(fp, -p.inner->exponent());
          },
          [&](const CompositionParams& p) {
            const double gx = p.inner(x);
            const double g1 = p.inner.deriv(x);
            return p.outer.second_deriv(gx) * g1 * g1 +
                   p.outer.deriv(gx) * p.inner.second_deriv(x);
          },
          [&](const TaperParams& p) {
            const double ax = std::abs(x);
            if (ax <= p.T) return p.base.second_deriv(x);
            if (ax >= 2.0 * p.T) return 0.0;
            const Cutoff c = cutoff(x, p.T);
            return p.base.second_deriv(x) * c.value + 2.0 * (p.base.deriv(x) - 1.0) * c.d1 +
                   (p.base(x) - x) * c.d2;
          },
          [&](const SampledParams&) -> double { throw DomainError("sampled map is not C^2"); },
          [&](const MonomialParams& p) {
            return p.degree * (p.degree - 1) * std::pow(x, p.degree - 2);
          },
      },
      node_->params);
}

double RealMap::increment(double x, double h) const {
  return std::visit(
      overloaded{
          [&](const AffineParams& p) { return p.slope * h; },
          [&](const BumpParams& p) {
            double v = h;
            for (const auto& b : p.bumps) v += b.value(x) - b.value(x - h);
            return v;
          },
          [&](const CompositionParams& p) {
            return p.outer.increment(p.inner(x), p.inner.increment(x, h));
          },
          [&](const auto&) { return (*this)(x) - (*this)(x - h); },
      },
      node_->params);
}

DerivBounds RealMap::bounds() const { return node_->bounds; }

MapKind RealMap::kind() const {
  return std::visit(overloaded{
                        [](const AffineParams&) { return MapKind::affine; },
                        [](const BumpParams&) { return MapKind::identity_plus_bump; },
                        [](const PowerIntegralParams&) { return MapKind::power_integral; },
                        [](const CompositionParams&) { return MapKind::composition; },
                        [](const TaperParams&) { return MapKind::tapered; },
                        [](const SampledParams&) { return MapKind::sampled_monotone; },
                        [](const MonomialParams&) { return MapKind::monomial; },
                    },
                    node_->params);
}

bool RealMap::is_c2() const { return node_->c2; }
bool RealMap::is_bilipschitz() const { return node_->bilipschitz; }

// ---------------------------------------------------------------------------
// Inversion

namespace {

struct Bracket {
  double lo, hi;
};

// Encloses the solution of g(x) = y for g increasing with g' in `b`, using
// g(0) = g0. Widened slightly, then verified and expanded if needed.
Bracket bracket_from_bounds(const std::function<double(double)>& g, double g0,
                            DerivBounds b, double y) {
  const double d = y - g0;
  double lo = d >= 0 ? d / b.hi : d / b.lo;
  double hi = d >= 0 ? d / b.lo : d / b.hi;
  double pad = 1e-9 * (1.0 + std::abs(lo) + std::abs(hi));
  lo -= pad;
  hi += pad;
  for (int i = 0; i < 64 && g(lo) > y; ++i) {
    pad *= 2.0;
    lo -= pad;
  }
  for (int i = 0; i < 64 && g(hi) < y; ++i) {
    pad *= 2.0;
    hi += pad;
  }
  return {lo, hi};
}

}  // namespace

MonotoneSolveResult solve_increasing(const std::function<double(double)>& f,
                                     const std::function<double(double)>& df, double y,
                                     double lo, double hi, double tol, double switch_width,
                                     int max_iter) {
  double x = 0.5 * (lo + hi);
  double fx = f(x);
  int iter = 1;
  auto result = [&](bool ok) { return MonotoneSolveResult{x, std::abs(fx - y), iter, ok}; };
  while (true) {
    if (std::abs(fx - y) <= tol) return result(true);
    if (iter >= max_iter) return result(false);
    if (fx < y) {
      lo = x;
    } else {
      hi = x;
    }
    double next = 0.5 * (lo + hi);
    if (hi - lo <= switch_width) {
      const double slope = df(x);
      if (slope > 0.0) {
        const double newton = x - (fx - y) / slope;
        if (newton > lo && newton < hi) next = newton;
      }
    }
    if (next <= lo || next >= hi || next == x) {
      // Bracket collapsed to adjacent doubles.
      return result(false);
    }
    x = next;
    fx = f(x);
    ++iter;
  }
}

double invert_at(const RealMap& f, double y, double tol) {
  if (!(tol > 0.0)) throw DomainError("invert_at needs tol > 0");
  require_bilipschitz(f, "invert_at");
  auto fn = [&](double x) { return f(x); };
  const Bracket br = bracket_from_bounds(fn, f(0.0), f.bounds(), y);
  const auto res =
      solve_increasing(fn, [&](double x) { return f.deriv(x); }, y, br.lo, br.hi, tol);
  if (!res.converged) {
    throw NonConvergence("invert_at: residual " + std::to_string(res.residual) +
                         " after " + std::to_string(res.iterations) + " iterations");
  }
  return res.x;
}

// ---------------------------------------------------------------------------
// Power tables

struct PowerTable::Cache {
  mutable std::shared_mutex mutex;
  std::vector<double> positive{0.0};  // Q(k w), k >= 0
  std::vector<double> negative{0.0};  // Q(-k w), k >= 0
};

PowerTable::PowerTable(RealMap base, double exponent)
    : base_(std::move(base)), exponent_(exponent), cache_(std::make_unique<Cache>()) {
  require_bilipschitz(base_, "power integral");
  if (!std::isfinite(exponent)) throw DomainError("power integral exponent must be finite");
}

PowerTable::~PowerTable() = default;

namespace {
constexpr double kCellTol = 1e-13;

bool is_affine(const RealMap& f) { return f.kind() == MapKind::affine; }
}  // namespace

double PowerTable::cell_integral(long cell) const {
  const double w = cell_width();
  const double lo = static_cast<double>(cell) * w;
  return quad::integrate([this](double t) { return deriv(t); }, lo, lo + w, {kCellTol, 48});
}

double PowerTable::prefix(long cell) const {
  const std::size_t k = static_cast<std::size_t>(cell >= 0 ? cell : -cell);
  auto& table = cell >= 0 ? cache_->positive : cache_->negative;
  {
    std::shared_lock lock(cache_->mutex);
    if (k < table.size()) return table[k];
  }
  std::unique_lock lock(cache_->mutex);
  while (table.size() <= k) {
    const long j = static_cast<long>(table.size());
    if (cell >= 0) {
      table.push_back(table.back() + cell_integral(j - 1));
    } else {
      table.push_back(table.back() - cell_integral(-j));
    }
  }
  return table[k];
}

double PowerTable::value(double x) const {
  if (exponent_ == 0.0) return x;
  if (exponent_ == 1.0) return base_.increment(x, x);
  if (is_affine(base_)) return std::pow(base_.deriv(0.0), exponent_) * x;
  const double w = cell_width();
  const long cell = static_cast<long>(std::floor(x / w));
  const double start = static_cast<double>(cell) * w;
  return prefix(cell) +
         quad::integrate([this](double t) { return deriv(t); }, start, x, {kCellTol, 48});
}

double PowerTable::deriv(double x) const {
  if (exponent_ == 0.0) return 1.0;
  if (exponent_ == 1.0) return base_.deriv(x);
  return std::pow(base_.deriv(x), exponent_);
}

DerivBounds PowerTable::bounds() const { return interval_power(base_.bounds(), exponent_); }

double PowerTable::inverse(double u) const {
  if (exponent_ == 0.0) return u;
  if (is_affine(base_) && exponent_ != 1.0) {
    return u / std::pow(base_.deriv(0.0), exponent_);
  }
  auto fn = [this](double x) { return value(x); };
  const Bracket br = bracket_from_bounds(fn, 0.0, bounds(), u);
  const double tol = 1e-12 * (1.0 + std::abs(u));
  const auto res =
      solve_increasing(fn, [this](double x) { return deriv(x); }, u, br.lo, br.hi, tol);
  // A collapsed bracket is the best double available; anything else is a
  // genuine failure.
  if (!res.converged && res.iterations >= 200) {
    throw NonConvergence("power integral inversion did not converge at u = " +
                         std::to_string(u));
  }
  return res.x;
}

}  // namespace qcext
