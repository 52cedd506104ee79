#include "qcext/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace qcext::sampling {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

RealMap random_bump_map(Rng& rng, double max_spread, int max_bumps, double center_span) {
  const int n = std::uniform_int_distribution<int>(1, std::max(1, max_bumps))(rng);
  std::vector<BumpProfile> bumps;
  const double share = max_spread / n;
  for (int i = 0; i < n; ++i) {
    BumpProfile b;
    b.center = uniform(rng, -center_span, center_span);
    b.halfwidth = uniform(rng, 0.5, 2.0);
    const double slope = uniform(rng, 0.2, 1.0) * share;
    const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    b.amplitude = sign * slope * b.halfwidth / BumpProfile::max_profile_slope();
    bumps.push_back(b);
  }
  return RealMap::identity_plus_bumps(std::move(bumps));
}

RealMap random_bilipschitz_map(Rng& rng, double max_L) {
  while (true) {
    const double c = std::exp(uniform(rng, std::log(0.5), std::log(2.0)));
    const double d = uniform(rng, -1.0, 1.0);
    const RealMap inner = random_bump_map(rng, 0.6);
    const RealMap f = compose(RealMap::affine(c, d), inner);
    const DerivBounds b = f.bounds();
    if (std::max(b.hi, 1.0 / b.lo) <= max_L) return f;
  }
}

ExtParams random_params(Rng& rng, double a_lo, double a_hi, double alpha_lo, double alpha_hi) {
  return {uniform(rng, a_lo, a_hi), uniform(rng, alpha_lo, alpha_hi)};
}

CircleMap random_circle_map(Rng& rng, double max_slope) {
  const int modes = std::uniform_int_distribution<int>(1, 3)(rng);
  std::vector<double> cs(modes);
  std::vector<double> ss(modes);
  std::vector<double> weight(modes);
  double total = 0.0;
  for (int k = 0; k < modes; ++k) {
    weight[k] = uniform(rng, 0.1, 1.0);
    total += weight[k];
  }
  for (int k = 0; k < modes; ++k) {
    // Mode k + 1 contributes (k + 1) * r to the slope budget.
    const double r = max_slope * weight[k] / total / (k + 1) * 0.999;
    const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    cs[k] = r * std::cos(phase);
    ss[k] = r * std::sin(phase);
  }
  return CircleMap::trig(uniform(rng, -0.5, 0.5), std::move(cs), std::move(ss));
}

Mobius random_mobius(Rng& rng, double max_center) {
  const double r = max_center * std::sqrt(uniform(rng, 0.0, 1.0));
  const double t = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return {uniform(rng, -std::numbers::pi, std::numbers::pi), std::polar(r, t)};
}

}  // namespace qcext::sampling
