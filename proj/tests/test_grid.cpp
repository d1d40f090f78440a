#include <doctest.h>

#include <cmath>

#include "fpk/grid.hpp"
#include "test_support.hpp"

using namespace fpk;
using namespace fpk::test;

TEST_CASE("grid construction and invariants") {
  auto g = build_grid(1, 8.0, 401);
  CHECK(g->spacing() == doctest::Approx(16.0 / 401).epsilon(1e-15));
  CHECK(g->center(200)[0] == 0.0);  // odd n puts a center at the origin
  CHECK(g->cell_count() == 401);
  CHECK(g->total_volume() == doctest::Approx(16.0).epsilon(1e-14));
  // centers symmetric about the origin
  for (int i = 0; i < 401; ++i)
    CHECK(g->center(i)[0] == doctest::Approx(-g->center(400 - i)[0]).epsilon(1e-15));

  auto g2 = build_grid(2, 6.0, 101);
  CHECK(g2->cell_count() == 101 * 101);
  CHECK(g2->center(g2->flat_index(50, 50)).norm() == 0.0);
  CHECK(g2->total_volume() == doctest::Approx(144.0).epsilon(1e-14));
}

TEST_CASE("grid construction rejects bad parameters") {
  CHECK_THROWS_AS(build_grid(1, 8.0, 400), ConfigError);  // even n
  CHECK_THROWS_AS(build_grid(1, 8.0, 1), ConfigError);
  CHECK_THROWS_AS(build_grid(3, 8.0, 401), ConfigError);
  CHECK_THROWS_AS(build_grid(1, -1.0, 401), ConfigError);
  CHECK_THROWS_AS(build_grid(1, 0.0, 401), ConfigError);
}

TEST_CASE("mass: box volume, single cell, Gaussian") {
  auto g = build_grid(1, 8.0, 401);
  CHECK(mass(GridFunction(g, 1.0)) == doctest::Approx(16.0).epsilon(1e-14));

  GridFunction ind(g, 0.0);
  ind[37] = 1.0;
  CHECK(mass(ind) == doctest::Approx(g->cell_volume()).epsilon(1e-15));

  const GridFunction gauss = sample_on_grid(g, [](const Vec& x) {
    return std::exp(-0.5 * x.norm_sq()) / std::sqrt(2.0 * M_PI);
  });
  CHECK(mass(gauss) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("weighted norms against a refined quadrature oracle") {
  auto g = build_grid(1, 8.0, 401);
  SUBCASE("zero function") {
    const GridFunction z(g, 0.0);
    CHECK(weighted_norm(z, 2.0, 2.0) == 0.0);
    CHECK(weighted_inner(z, z, 2.0) == 0.0);
    CHECK(gradient_norm(z, 2.0) == 0.0);
  }
  SUBCASE("k = 0, p = 2 reduces to the plain quadrature sum") {
    GridFunction f = gaussian_bump(g, Vec(1.0), 0.8);
    double s = 0.0;
    for (int i = 0; i < f.size(); ++i) s += f[i] * f[i];
    CHECK(weighted_norm(f, 0.0, 2.0) ==
          doctest::Approx(std::sqrt(s * g->cell_volume())).epsilon(1e-13));
  }
  SUBCASE("f = <x>^-4 with k = 2 matches the Richardson oracle to 1e-6") {
    const GridFunction f =
        sample_on_grid(g, [](const Vec& x) { return std::pow(1.0 + x.norm_sq(), -2.0); });
    const double oracle = std::sqrt(refined_midpoint(
        [](double x) { return std::pow(1.0 + x * x, -4.0) * (1.0 + x * x); }, 8.0, 3207));
    CHECK(weighted_norm(f, 2.0, 2.0) == doctest::Approx(oracle).epsilon(1e-6));
  }
  SUBCASE("weighted inner product is bilinear and symmetric") {
    GridFunction f = gaussian_bump(g, Vec(0.5), 1.0);
    GridFunction h = gaussian_bump(g, Vec(-1.0), 1.5);
    CHECK(weighted_inner(f, h, 2.0) == weighted_inner(h, f, 2.0));
    GridFunction f2 = f;
    for (int i = 0; i < f2.size(); ++i) f2[i] *= 2.0;
    CHECK(weighted_inner(f2, h, 2.0) == doctest::Approx(2.0 * weighted_inner(f, h, 2.0)).epsilon(1e-14));
  }
  SUBCASE("gradient norm of a Gaussian against the closed form") {
    // |f'|^2 with f = exp(-x^2/2): x^2 exp(-x^2); weight <x>^2
    const GridFunction f =
        sample_on_grid(g, [](const Vec& x) { return std::exp(-0.5 * x.norm_sq()); });
    const double oracle = std::sqrt(refined_midpoint(
        [](double x) { return x * x * std::exp(-x * x) * (1.0 + x * x); }, 8.0, 3207));
    CHECK(gradient_norm(f, 2.0) == doctest::Approx(oracle).epsilon(1e-3));
  }
}

TEST_CASE("2-d norms agree with tensor-product quadrature") {
  auto g = build_grid(2, 6.0, 61);
  const GridFunction f = sample_on_grid(g, [](const Vec& x) {
    return std::exp(-0.5 * x.norm_sq());
  });
  // sum f^2 <x>^k h^2 computed by direct loops
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i)
    s += f[i] * f[i] * weight(g->center(i), 2.0);
  s *= g->cell_volume();
  CHECK(weighted_norm(f, 2.0, 2.0) == doctest::Approx(std::sqrt(s)).epsilon(1e-13));
}

TEST_CASE("grid function validation") {
  auto g = build_grid(1, 8.0, 5);
  CHECK_THROWS_AS(GridFunction(g, std::vector<double>{1.0, 2.0}), ConfigError);
  GridFunction f(g, 1.0);
  CHECK(f.all_finite());
  f[2] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(f.all_finite());
}
