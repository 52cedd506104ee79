#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "qcext/errors.hpp"
#include "qcext/realmap.hpp"
#include "qcext/sampling.hpp"

using namespace qcext;

namespace {

RealMap bump_map(double c, double h, double a) { return RealMap::identity_plus_bump({c, h, a}); }

// Dense check that f' stays inside the certified enclosure.
void check_bounds_dense(const RealMap& f, double lo = -100.0, double hi = 100.0, int n = 20001) {
  const DerivBounds b = f.bounds();
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    const double d = f.deriv(x);
    CHECK(d >= b.lo - 1e-12);
    CHECK(d <= b.hi + 1e-12);
  }
}

void check_increasing(const RealMap& f, double lo = -20.0, double hi = 20.0, int n = 4001) {
  double prev = f(lo);
  for (int i = 1; i < n; ++i) {
    const double v = f(lo + (hi - lo) * i / (n - 1));
    CHECK(v > prev);
    prev = v;
  }
}

}  // namespace

TEST_CASE("evaluation of simple maps") {
  CHECK(RealMap::affine(2, 1)(3) == 7.0);
  CHECK(bump_map(0, 1, 0.0)(5) == 5.0);
  const RealMap chain = compose(RealMap::affine(2, 0), RealMap::affine(1, 1));
  CHECK(chain(0) == 2.0);
  CHECK(eval(RealMap::identity(), std::numbers::pi) == std::numbers::pi);
  for (double x : {-3.0, 0.0, 0.7, 11.0}) CHECK(deriv(RealMap::affine(2.5, -1), x) == 2.5);
  CHECK(bump_map(0, 1, 0.3).deriv(1.5) == 1.0);
  CHECK(bump_map(0, 1, 0.3)(-4.0) == -4.0);
}

TEST_CASE("bump profile slope constant") {
  // p'(t) = -6 t (1 - t^2)^2 peaks at t = 1/sqrt(5): 6/sqrt(5) (4/5)^2 = 96/(25 sqrt 5).
  const double mp = 6.0 / std::sqrt(5.0) * 0.64;
  CHECK(BumpProfile::max_profile_slope() == doctest::Approx(mp).epsilon(1e-15));
  double scan = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double t = -1.0 + 2.0 * i / 200000;
    scan = std::max(scan, std::abs(-6.0 * t * (1 - t * t) * (1 - t * t)));
  }
  CHECK(scan <= mp);
  CHECK(scan == doctest::Approx(mp).epsilon(1e-9));
  const double eps = 0.3;
  const DerivBounds b = deriv_bounds(bump_map(0, 1, eps));
  CHECK(b.lo == doctest::Approx(1 - eps * mp).epsilon(1e-15));
  CHECK(b.hi == doctest::Approx(1 + eps * mp).epsilon(1e-15));
}

TEST_CASE("derivative bounds of affine maps and compositions") {
  const DerivBounds a = RealMap::affine(3, 4).bounds();
  CHECK(a.lo == 3.0);
  CHECK(a.hi == 3.0);
  const DerivBounds c = compose(RealMap::affine(2, 0), RealMap::affine(3, 1)).bounds();
  CHECK(c.lo == 6.0);
  CHECK(c.hi == 6.0);
  oracle::for_all(5, 30, [](auto& rng, int) {
    const RealMap f = sampling::random_bump_map(rng);
    const RealMap g = sampling::random_bump_map(rng);
    const DerivBounds bf = f.bounds(), bg = g.bounds(), bc = compose(f, g).bounds();
    CHECK(bc.lo >= bf.lo * bg.lo * (1 - 1e-15));
    CHECK(bc.hi <= bf.hi * bg.hi * (1 + 1e-15));
  });
}

TEST_CASE("bump amplitude beyond the monotone limit is rejected") {
  CHECK_THROWS_AS(bump_map(0, 1, 0.95), DomainError);
  CHECK_THROWS_AS(RealMap::affine(-1, 0), DomainError);
  CHECK_THROWS_AS(RealMap::identity_plus_bump({0, 0.0, 0.1}), DomainError);
}

TEST_CASE("certified bounds hold under dense sampling for every kind") {
  oracle::for_all(21, 8, [](auto& rng, int) {
    const RealMap f = sampling::random_bilipschitz_map(rng, 3.0);
    check_bounds_dense(f);
    check_increasing(f);
    const RealMap p = power_integral_map(f, 0.4);
    check_bounds_dense(p, -10, 10, 2001);
    check_increasing(p, -10, 10, 801);
    const RealMap t = taper(sampling::random_bump_map(rng), 2.0);
    check_increasing(t, -10, 10);
    check_bounds_dense(t, -10, 10);
  });
  const RealMap s = RealMap::sampled_monotone({-2, -1, 0, 0.5, 3}, {-5, -1, 0, 2, 2.5});
  check_bounds_dense(s, -5, 5);
  check_increasing(s, -5, 5);
}

TEST_CASE("derivative agrees with centered differences at second order") {
  oracle::for_all(3, 20, [](auto& rng, int) {
    const RealMap f = compose(sampling::random_bump_map(rng), sampling::random_bump_map(rng));
    const double x = oracle::uniform(rng, -3, 3);
    const double h = 1e-5;
    CHECK(std::abs(f.deriv(x) - oracle::central_diff(f, x, h)) <= 10 * h * h + 1e-9);
  });
  // Error ratio under h -> h/2 inside a single polynomial piece.
  const RealMap f = bump_map(0, 2, 0.5);
  const double x = 0.3;
  const double e1 = std::abs(f.deriv(x) - oracle::central_diff(f, x, 1e-2));
  const double e2 = std::abs(f.deriv(x) - oracle::central_diff(f, x, 5e-3));
  CHECK(e1 / e2 >= 3.5);
  CHECK(e1 / e2 <= 4.5);
}

TEST_CASE("second derivative and increment") {
  const RealMap f = bump_map(0.2, 1.3, 0.4);
  for (double x : {-0.5, 0.0, 0.9}) {
    CHECK(f.second_deriv(x) ==
          doctest::Approx(oracle::central_diff([&](double t) { return f.deriv(t); }, x, 1e-5))
              .epsilon(1e-7));
    CHECK(f.increment(x, 1e-9) == doctest::Approx(f.deriv(x) * 1e-9).epsilon(1e-6));
    CHECK(f.increment(x, 0.7) == doctest::Approx(f(x) - f(x - 0.7)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(RealMap::sampled_monotone({0, 1, 2}, {0, 1, 3}).second_deriv(0.5), DomainError);
}

TEST_CASE("compose with identity") {
  const RealMap f = bump_map(-1, 2, 0.3);
  const RealMap g = compose(RealMap::identity(), f);
  for (double x = -4; x <= 4; x += 0.37) CHECK(g(x) == f(x));
}

TEST_CASE("invert_at") {
  CHECK(invert_at(RealMap::affine(2, 1), 7, 1e-12) == doctest::Approx(3).epsilon(1e-12));
  CHECK(invert_at(RealMap::identity(), std::numbers::pi, 1e-14) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-14));
  const RealMap f = bump_map(0, 1, 0.3);
  const double x = invert_at(f, f(0.4), 1e-13);
  CHECK(std::abs(x - oracle::bisect(f, f(0.4), -5, 5)) < 1e-12);
  CHECK(std::abs(x - 0.4) < 1e-12);
  oracle::for_all(9, 100, [](auto& rng, int) {
    const RealMap g = sampling::random_bilipschitz_map(rng, 4.0);
    const double x0 = oracle::uniform(rng, -30, 30);
    const double tol = 1e-10;
    const double x1 = invert_at(g, g(x0), tol);
    CHECK(std::abs(g(x1) - g(x0)) <= tol);
    CHECK(std::abs(x1 - x0) <= 2 * tol / g.bounds().lo);
  });
}

TEST_CASE("power integral special cases") {
  const RealMap lin = power_integral_map(RealMap::affine(3, 2), 0.5);
  for (double x : {-2.0, 0.0, 1.5}) CHECK(lin(x) == doctest::Approx(std::sqrt(3) * x).epsilon(1e-14));
  const RealMap f = bump_map(0.3, 1.0, 0.35);
  const RealMap zero = power_integral_map(f, 0.0);
  const RealMap one = power_integral_map(f, 1.0);
  for (double x = -3; x <= 3; x += 0.25) {
    CHECK(zero(x) == doctest::Approx(x).epsilon(1e-14));
    CHECK(std::abs(one(x) - (f(x) - f(0))) < 1e-13);
  }
  const DerivBounds b = f.bounds();
  const DerivBounds neg = power_integral_map(f, -0.5).bounds();
  CHECK(neg.lo == doctest::Approx(std::pow(b.hi, -0.5)));
  CHECK(neg.hi == doctest::Approx(std::pow(b.lo, -0.5)));
}

TEST_CASE("power integral matches an independent Simpson oracle") {
  const RealMap f = RealMap::identity_plus_bumps({{0.3, 1.0, 0.35}, {-1.0, 0.7, -0.1}});
  const double beta = 0.37;
  const RealMap q = power_integral_map(f, beta);
  auto integrand = [&](double t) { return std::pow(f.deriv(t), beta); };
  for (double x : {-2.3, -0.4, 0.0, 0.8, 1.9}) {
    const double ref = x >= 0 ? oracle::simpson(integrand, 0.0, x) : -oracle::simpson(integrand, x, 0.0);
    CHECK(std::abs(q(x) - ref) < 1e-11);
    CHECK(q.deriv(x) == doctest::Approx(integrand(x)).epsilon(1e-14));
  }
}

TEST_CASE("power table is safe under concurrent queries") {
  const RealMap f = bump_map(0.5, 3.0, 0.4);
  const RealMap q = power_integral_map(f, 0.3);
  std::vector<double> serial(400);
  for (int i = 0; i < 400; ++i) serial[i] = power_integral_map(f, 0.3)(-20.0 + 0.1 * i);
  std::vector<double> parallel(400);
  {
    std::vector<std::jthread> workers;
    for (int w = 0; w < 4; ++w) {
      workers.emplace_back([&, w] {
        for (int i = w; i < 400; i += 4) parallel[i] = q(-20.0 + 0.1 * i);
      });
    }
  }
  for (int i = 0; i < 400; ++i) CHECK(parallel[i] == serial[i]);
}

TEST_CASE("taper") {
  const RealMap id = taper(RealMap::identity(), 3.0);
  for (double x = -10; x <= 10; x += 0.5) CHECK(id(x) == x);
  const RealMap f = bump_map(1.0, 2.0, 0.5);
  const double T = 1.5;
  const RealMap t = taper(f, T);
  for (double x = -T; x <= T; x += 0.1) CHECK(t(x) == doctest::Approx(f(x)).epsilon(1e-15));
  for (double x : {-10.0, -3.0, 3.0, 3.5, 7.0}) CHECK(t(x) == x);
  CHECK_THROWS_AS(taper(f, 0.0), DomainError);
  // A far-reaching excursion with a short cutoff cannot be certified.
  CHECK_THROWS_AS(taper(RealMap::affine(1.0, 5.0), 0.5), DomainError);
}

TEST_CASE("sampled monotone maps") {
  const RealMap s = RealMap::sampled_monotone({0, 1, 2}, {0, 1, 2});
  for (double x : {-1.0, 0.5, 1.7, 4.0}) CHECK(s(x) == doctest::Approx(x).epsilon(1e-15));
  CHECK_THROWS_AS(RealMap::sampled_monotone({0, 1, 1}, {0, 1, 2}), DomainError);
  CHECK_THROWS_AS(RealMap::sampled_monotone({0, 1}, {1, 0}), DomainError);
  CHECK_FALSE(s.is_c2());
}

TEST_CASE("monomial special case") {
  const RealMap cube = RealMap::monomial(3);
  CHECK(cube(2.0) == 8.0);
  CHECK(cube.deriv(2.0) == 12.0);
  CHECK(cube.second_deriv(2.0) == 12.0);
  CHECK_FALSE(cube.is_bilipschitz());
  CHECK(cube.is_c2());
  CHECK(cube.kind() == MapKind::monomial);
  CHECK_THROWS_AS(taper(cube, 1.0), DomainError);
}
