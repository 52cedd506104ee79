#pragma once

#include <random>

#include "qcext/douady_earle.hpp"
#include "qcext/extensions.hpp"
#include "qcext/realmap.hpp"

namespace qcext::sampling {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// Id + 1..max_bumps bumps with centers in [-center_span, center_span],
/// halfwidths in [0.5, 2] and total certified slope excursion <= max_spread.
RealMap random_bump_map(Rng& rng, double max_spread = 0.5, int max_bumps = 3,
                        double center_span = 3.0);

/// c * (Id + bumps) + d with c in [1/2, 2], retried until max(B, 1/b) <= max_L.
RealMap random_bilipschitz_map(Rng& rng, double max_L);

ExtParams random_params(Rng& rng, double a_lo, double a_hi, double alpha_lo, double alpha_hi);

/// theta + shift + a few Fourier modes with sum k|c_k| <= max_slope.
CircleMap random_circle_map(Rng& rng, double max_slope);

Mobius random_mobius(Rng& rng, double max_center);

}  // namespace qcext::sampling
