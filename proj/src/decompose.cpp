#include "qcext/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "qcext/errors.hpp"

namespace qcext {

double decomposition_epsilon(double eps0) { return eps0 / (1.0 + 2.0 * eps0); }

double sup_distance(const RealMap& f, const RealMap& g, double lo, double hi, int samples) {
  if (samples < 2) throw DomainError("sup_distance needs at least two samples");
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = lo + (hi - lo) * i / (samples - 1);
    worst = std::max(worst, std::abs(f(x) - g(x)));
  }
  return worst;
}

namespace {

void certify(const RealMap& factor, double eps0, int index) {
  const DerivBounds b = factor.bounds();
  if (!(b.lo > 1.0 - eps0) || !(b.hi < 1.0 + eps0)) {
    throw ToleranceFailure("factor " + std::to_string(index) + " has derivative bounds [" +
                           std::to_string(b.lo) + ", " + std::to_string(b.hi) +
                           "] outside (1 - eps0, 1 + eps0)");
  }
}

}  // namespace

Factorization decompose_bilip(const RealMap& f, double eps0, double tol,
                              const DecomposeOptions& opts) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw DomainError("decompose_bilip needs 0 < eps0 < 1");
  if (!(tol > 0.0)) throw DomainError("decompose_bilip needs tol > 0");
  if (!f.is_bilipschitz()) throw DomainError("decompose_bilip needs a bi-Lipschitz map");

  const DerivBounds fb = f.bounds();
  const double L = std::max(fb.hi, 1.0 / fb.lo);

  Factorization fac;
  fac.eps0 = eps0;
  if (L < 1.0 + eps0) {
    fac.factors = {f};
    return fac;
  }

  const double eps = decomposition_epsilon(eps0);
  const double log_step = std::log1p(eps);
  const int guard = 10 * static_cast<int>(std::ceil(std::log(L) / log_step));

  // Q_beta tables share one base map; consecutive factors share tables so the
  // quadrature memo is reused across rounds.
  std::vector<std::shared_ptr<const PowerTable>> tables{std::make_shared<const PowerTable>(f, 0.0)};
  double beta = 0.0;
  double L_k = L;
  while (!(L_k < 1.0 + eps0)) {
    if (static_cast<int>(tables.size()) > guard) {
      throw NonTermination("decompose_bilip exceeded " + std::to_string(guard) + " rounds");
    }
    const double alpha_k = log_step / std::log(L_k);
    beta += (1.0 - beta) * alpha_k;
    tables.push_back(std::make_shared<const PowerTable>(f, beta));
    L_k = std::pow(L, 1.0 - beta);
  }
  fac.rounds = static_cast<int>(tables.size()) - 1;

  fac.factors.push_back(RealMap::affine(1.0, f(0.0)));
  fac.factors.push_back(
      power_integral_map(std::make_shared<const PowerTable>(f, 1.0), tables.back()));
  for (std::size_t k = tables.size() - 1; k >= 1; --k) {
    fac.factors.push_back(power_integral_map(tables[k], tables[k - 1]));
  }
  for (std::size_t j = 0; j < fac.factors.size(); ++j) {
    certify(fac.factors[j], eps0, static_cast<int>(j));
  }

  fac.recomposition_error =
      sup_distance(f, recompose(fac), opts.window_lo, opts.window_hi, opts.window_samples);
  if (!(fac.recomposition_error <= tol)) {
    throw ToleranceFailure("recomposition error " + std::to_string(fac.recomposition_error) +
                           " exceeds tol " + std::to_string(tol));
  }
  return fac;
}

RealMap recompose(const Factorization& fac) {
  if (fac.factors.empty()) throw DomainError("recompose needs at least one factor");
  RealMap result = fac.factors.back();
  for (auto it = fac.factors.rbegin() + 1; it != fac.factors.rend(); ++it) {
    result = compose(*it, result);
  }
  return result;
}

}  // namespace qcext
