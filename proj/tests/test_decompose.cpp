#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcext/decompose.hpp"
#include "qcext/errors.hpp"
#include "qcext/sampling.hpp"

using namespace qcext;

TEST_CASE("epsilon choice") {
  for (double eps0 : {0.01, 0.1, 0.25, 0.9}) {
    const double eps = decomposition_epsilon(eps0);
    CHECK(eps < eps0);
    CHECK(eps0 > eps / (1 - eps));
  }
  CHECK(decomposition_epsilon(0.25) == doctest::Approx(1.0 / 6).epsilon(1e-15));
}

TEST_CASE("near-identity maps are returned whole") {
  const RealMap f = RealMap::identity_plus_bump({0, 1, 0.1});
  const Factorization fac = decompose_bilip(f, 0.25, 1e-6);
  REQUIRE(fac.factors.size() == 1);
  CHECK(fac.rounds == 0);
  CHECK(fac.factors[0](0.3) == f(0.3));
  CHECK(recompose(fac)(0.7) == f(0.7));
}

TEST_CASE("doubling map factors into pure scalings") {
  const double eps0 = 0.25, eps = 1.0 / 6;
  const Factorization fac = decompose_bilip(RealMap::affine(2, 0), eps0, 1e-9);
  // L_k = 2 / (7/6)^k first drops below 5/4 at k = 4.
  CHECK(fac.rounds == 4);
  REQUIRE(fac.factors.size() == 6);
  CHECK(fac.factors[0](1.5) == 1.5);  // translation by f(0) = 0
  double product = 1.0;
  for (std::size_t j = 1; j < fac.factors.size(); ++j) {
    const RealMap& g = fac.factors[j];
    const double s = g.deriv(0.0);
    for (double x : {-5.0, 0.3, 8.0}) CHECK(g(x) == doctest::Approx(s * x).epsilon(1e-12));
    CHECK(g.bounds().lo == doctest::Approx(s).epsilon(1e-12));
    CHECK(g.bounds().hi == doctest::Approx(s).epsilon(1e-12));
    if (j >= 2) CHECK(s == doctest::Approx(1 + eps).epsilon(1e-12));
    product *= s;
  }
  CHECK(fac.factors[1].deriv(0.0) < 1 + eps0);
  CHECK(std::abs(product - 2.0) <= 1e-8);
  const RealMap r = recompose(fac);
  for (double x : {-10.0, 1.0, 10.0}) CHECK(std::abs(r.deriv(x) - 2.0) <= 1e-8);
  CHECK(std::ceil(std::log(2.0) / std::log1p(eps)) + 2 >= static_cast<double>(fac.factors.size()));
}

TEST_CASE("bump map round trip") {
  const RealMap f = RealMap::identity_plus_bump({0, 1, 0.4});
  const double tol = 1e-7;
  const Factorization fac = decompose_bilip(f, 0.2, tol);
  CHECK(fac.recomposition_error <= tol);
  CHECK(sup_distance(f, recompose(fac), -10, 10, 1000) == fac.recomposition_error);
  for (const auto& g : fac.factors) {
    CHECK(g.bounds().lo > 0.8);
    CHECK(g.bounds().hi < 1.2);
  }
}

TEST_CASE("certified L shrinks by 1 + eps per round") {
  const RealMap f = compose(RealMap::affine(1.8, 0.5), RealMap::identity_plus_bump({1, 2, 0.6}));
  const double eps0 = 0.1, eps = decomposition_epsilon(eps0);
  const Factorization fac = decompose_bilip(f, eps0, 1e-6);
  // Factors 2.. are f_N, ..., f_1, each of certified spread exactly 1 + eps.
  for (std::size_t j = 2; j < fac.factors.size(); ++j) {
    const DerivBounds b = fac.factors[j].bounds();
    CHECK(std::max(b.hi, 1 / b.lo) == doctest::Approx(1 + eps).epsilon(1e-12));
  }
}

TEST_CASE("random bi-Lipschitz maps") {
  oracle::for_all(41, 6, [](auto& rng, int) {
    const RealMap f = sampling::random_bilipschitz_map(rng, 4.0);
    const DerivBounds b = f.bounds();
    const double L = std::max(b.hi, 1 / b.lo);
    for (double eps0 : {0.1, 0.25}) {
      const Factorization fac = decompose_bilip(f, eps0, 1e-6);
      for (const auto& g : fac.factors) {
        CHECK(g.bounds().lo > 1 - eps0);
        CHECK(g.bounds().hi < 1 + eps0);
        // Dense spot check of the certificate.
        for (double x = -12; x <= 12; x += 0.25) CHECK(std::abs(g.deriv(x) - 1) < eps0);
      }
      CHECK(fac.recomposition_error <= 1e-6);
      const double cap = std::ceil(std::log(L) / std::log1p(decomposition_epsilon(eps0))) + 2;
      CHECK(static_cast<double>(fac.factors.size()) <= cap);
    }
  });
}

TEST_CASE("errors") {
  const RealMap f = RealMap::affine(3, 0);
  CHECK_THROWS_AS(decompose_bilip(f, 0.0, 1e-6), DomainError);
  CHECK_THROWS_AS(decompose_bilip(f, 1.0, 1e-6), DomainError);
  CHECK_THROWS_AS(decompose_bilip(f, 0.2, 0.0), DomainError);
  CHECK_THROWS_AS(decompose_bilip(RealMap::monomial(3), 0.2, 1e-6), DomainError);
  CHECK_THROWS_AS(decompose_bilip(compose(RealMap::affine(3, 100), RealMap::identity_plus_bump({0, 1, 0.5})), 0.2, 1e-300),
                  ToleranceFailure);
  CHECK_THROWS_AS(recompose(Factorization{}), DomainError);
}
