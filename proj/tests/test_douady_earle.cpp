#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qcext/douady_earle.hpp"
#include "qcext/errors.hpp"
#include "qcext/sampling.hpp"

using namespace qcext;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Direct quadrature of the defect integral on a fine uniform grid.
Complex defect_oracle(const std::function<double(double)>& lift, Complex w, Complex z, int n) {
  Complex sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double th = kTwoPi * j / n;
    const Complex fz = std::polar(1.0, lift(th));
    sum += (w - fz) / (1.0 - std::conj(w) * fz) / std::norm(std::polar(1.0, th) - z);
  }
  return sum * (kTwoPi / n);
}

}  // namespace

TEST_CASE("Mobius maps") {
  const Mobius m{0.7, {0.3, -0.4}};
  const Complex w{0.2, 0.5};
  CHECK(std::abs(m.inverse()(m(w)) - w) < 1e-15);
  CHECK(std::abs(m(m.c)) < 1e-16);
  for (double th = -7; th < 7; th += 0.3) {
    CHECK(std::abs(std::polar(1.0, m.lift(th)) - m(std::polar(1.0, th))) < 1e-14);
  }
  // The lift advances by exactly 2 pi per turn.
  CHECK(m.lift(1.0 + kTwoPi) - m.lift(1.0) == doctest::Approx(kTwoPi).epsilon(1e-14));
  CHECK_THROWS_AS(CircleMap::mobius({0, {1.0, 0.0}}), DomainError);
}

TEST_CASE("circle maps") {
  const CircleMap f = CircleMap::trig(0.3, {0.2, 0.05}, {0.1});
  for (double th = 0; th < kTwoPi; th += 0.1) {
    CHECK(f.lift(th + kTwoPi) - f.lift(th) == doctest::Approx(kTwoPi).epsilon(1e-12));
    CHECK(f.lift(th + 1e-3) > f.lift(th));
  }
  CHECK_THROWS_AS(CircleMap::trig(0, {0.6}, {0.0, 0.3}), DomainError);
  const CircleMap r = CircleMap::rotation(1.0);
  CHECK(std::abs(compose(r, f).at(0.4) - std::polar(1.0, f.lift(0.4) + 1.0)) < 1e-15);
}

TEST_CASE("defect values") {
  const CircleMap id = CircleMap::identity();
  CHECK(std::abs(de_defect(id, 0.0, 0.0, 64)) < 1e-15);
  CHECK(std::abs(de_defect(CircleMap::rotation(0.8), 0.0, 0.0, 64)) < 1e-14);
  for (Complex z : {Complex(0.3, 0.1), Complex(-0.5, 0.4), Complex(0.0, -0.7)}) {
    CHECK(std::abs(de_defect(id, z, z, 512)) <= 1e-10);
  }
  const CircleMap f = CircleMap::trig(0.1, {0.2}, {-0.1});
  const Complex w{0.1, -0.2}, z{0.25, 0.3};
  const Complex ref = defect_oracle([&](double t) { return f.lift(t); }, w, z, 4096);
  CHECK(std::abs(de_defect(f, w, z, 512) - ref) < 1e-10);
  CHECK_THROWS_AS(de_defect(id, 1.0, 0.0, 64), DomainError);
  CHECK_THROWS_AS(de_defect(id, 0.0, 0.0, 8), DomainError);
}

TEST_CASE("solver fixes the identity and Mobius maps") {
  for (Complex z : {Complex(0, 0), Complex(0.4, -0.3), Complex(-0.8, 0.1)}) {
    CHECK(std::abs(extend_de(CircleMap::identity(), z) - z) <= 1e-12);
  }
  oracle::for_all(12, 20, [](auto& rng, int) {
    const Mobius m = sampling::random_mobius(rng, 0.6);
    for (int k = 0; k < 5; ++k) {
      const Complex z = std::polar(oracle::uniform(rng, 0, 0.6), oracle::uniform(rng, 0, kTwoPi));
      CHECK(std::abs(extend_de(CircleMap::mobius(m), z) - m(z)) <= 1e-6);
    }
  });
}

TEST_CASE("solver output satisfies the defect equation") {
  oracle::for_all(13, 20, [](auto& rng, int) {
    const CircleMap f = sampling::random_circle_map(rng, 0.5);
    const Complex z = std::polar(oracle::uniform(rng, 0, 0.7), oracle::uniform(rng, 0, kTwoPi));
    const DESolution s = solve_de(f, z, 1e-12);
    CHECK(s.iterations <= 50);
    CHECK(std::abs(s.w) < 1.0);
    CHECK(std::abs(de_defect(f, s.w, z, 512)) <= 1e-12);
    CHECK(s.defect == std::abs(de_defect(f, s.w, z, 512)));
  });
  const DESolution small = solve_de(CircleMap::trig(0.0, {0.05}, {0.02}), 0.0);
  CHECK(std::abs(small.w) < 0.1);
}

TEST_CASE("quadrature refinement barely moves smooth solutions") {
  const CircleMap f = CircleMap::trig(0.2, {0.15, 0.03}, {-0.1});
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0.3)}) {
    CHECK(std::abs(extend_de(f, z, 1e-13, 256) - extend_de(f, z, 1e-13, 512)) <= 1e-8);
  }
}

TEST_CASE("conformal naturality") {
  const CircleMap id = CircleMap::identity();
  const Mobius ident{0.0, {0.0, 0.0}};
  const CircleMap f = CircleMap::trig(0.2, {0.1}, {0.15});
  CHECK(de_naturality_residual(f, ident, {0.3, 0.2}, Naturality::post_composition) <= 2e-12);
  CHECK(de_naturality_residual(id, {1.1, {0.2, 0.3}}, {0.1, -0.4}, Naturality::pre_composition) <= 1e-6);
  oracle::for_all(14, 5, [](auto& rng, int) {
    const CircleMap g = sampling::random_circle_map(rng, 0.3);
    const Mobius m = sampling::random_mobius(rng, 0.5);
    const Complex z = std::polar(oracle::uniform(rng, 0, 0.6), oracle::uniform(rng, 0, kTwoPi));
    CHECK(de_naturality_residual(g, m, z, Naturality::post_composition) <= 1e-5);
    CHECK(de_naturality_residual(g, m, z, Naturality::pre_composition) <= 1e-5);
  });
}

TEST_CASE("bad inputs") {
  CHECK_THROWS_AS(solve_de(CircleMap::identity(), {1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(solve_de(CircleMap::identity(), 0.0, 0.0), DomainError);
}
