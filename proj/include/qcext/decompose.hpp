#pragma once

#include <vector>

#include "qcext/realmap.hpp"

namespace qcext {

/// f = factors[0] o factors[1] o ... o factors.back().
struct Factorization {
  std::vector<RealMap> factors;
  double eps0 = 0.0;
  /// Sup of |recompose - f| over the check window, filled by decompose_bilip.
  double recomposition_error = 0.0;
  /// Rounds of the power-integral step (0 for the single-factor case).
  int rounds = 0;
};

struct DecomposeOptions {
  double window_lo = -10.0;
  double window_hi = 10.0;
  int window_samples = 1000;
};

/// epsilon = eps0 / (1 + 2 eps0): satisfies epsilon < eps0 and
/// eps0 > epsilon / (1 - epsilon).
double decomposition_epsilon(double eps0);

/// Factors a bi-Lipschitz f into near-identity maps with certified
/// ||f_j' - 1||_inf < eps0.
///
/// With L = max(B, 1/b): if L < 1 + eps0 the result is [f]. Otherwise the
/// translation x -> x + f(0) is split off, and round k builds
/// f_k = power integral of g_{k-1} with exponent log(1+eps)/log(L_{k-1}),
/// g_k = g_{k-1} o f_k^{-1}, until L_N < 1 + eps0. Every map involved is a
/// reparametrized power integral of f itself: with beta_k the accumulated
/// exponent, f_k = Q_{beta_k} o Q_{beta_{k-1}}^{-1} and g_N = Q_1 o Q_{beta_N}^{-1}.
/// The result is [translation, g_N, f_N, ..., f_1].
///
/// Throws ToleranceFailure if a factor's certified bounds leave
/// (1 - eps0, 1 + eps0) or the recomposition error on the window exceeds tol,
/// NonTermination past 10 ceil(log L / log(1 + eps)) rounds.
Factorization decompose_bilip(const RealMap& f, double eps0, double tol,
                              const DecomposeOptions& opts = {});

/// Left-to-right composition of the factors.
RealMap recompose(const Factorization& fac);

/// sup over samples x in [lo, hi] of |g(x) - f(x)|.
double sup_distance(const RealMap& f, const RealMap& g, double lo, double hi, int samples);

}  // namespace qcext
