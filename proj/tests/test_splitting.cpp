#include <doctest.h>

#include <cmath>

#include "fpk/spectral.hpp"
#include "fpk/splitting.hpp"
#include "test_support.hpp"

using namespace fpk;
using namespace fpk::test;

TEST_CASE("cutoff profile") {
  CHECK(zeta0(0.0) == 1.0);
  CHECK(zeta0(1.0) == 1.0);
  CHECK(zeta0(2.0) == 0.0);
  CHECK(zeta0(5.0) == 0.0);
  CHECK(zeta0(1.5) == doctest::Approx(0.5).epsilon(1e-15));  // smoothstep midpoint

  // derivative range [-1.5, 0], peak slope at s = 1.5, checked against
  // difference quotients of the profile
  double max_slope = 0.0;
  for (double s = 0.9; s <= 2.1; s += 1e-4) {
    const double dq = (zeta0(s + 5e-5) - zeta0(s - 5e-5)) / 1e-4;
    CHECK(dq <= 1e-9);
    CHECK(dq >= -2.0);
    CHECK(zeta0_prime(s) == doctest::Approx(dq).epsilon(1e-4));
    max_slope = std::max(max_slope, -zeta0_prime(s));
  }
  CHECK(max_slope == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("build_cutoff: plateaus, range, flags") {
  auto g = build_grid(1, 12.0, 241);
  const auto spec = build_cutoff(g, 4, 10.0);
  CHECK_FALSE(spec.support_truncated);
  for (int i = 0; i < spec.zeta.size(); ++i) {
    const double r = g->center(i).norm();
    CHECK(spec.zeta[i] >= 0.0);
    CHECK(spec.zeta[i] <= 1.0);
    if (r <= 4.0) CHECK(spec.zeta[i] == 1.0);
    if (r >= 8.0) CHECK(spec.zeta[i] == 0.0);
  }
  CHECK(build_cutoff(g, 7, 1.0).support_truncated);  // 2n = 14 >= 12
  CHECK_THROWS_AS(build_cutoff(g, 0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_cutoff(g, -1, 1.0), ConfigError);
  CHECK_THROWS_AS(build_cutoff(g, 2, -1.0), ConfigError);
  // M = 0 is the degenerate split A = L, B = 0 used below
  CHECK(build_cutoff(g, 2, 0.0).M == 0.0);
}

TEST_CASE("split reassembles the generator") {
  auto g = build_grid(1, 8.0, 101);
  const auto op = assemble_operator(g, ForceField::linear(1));
  const auto cutoff = build_cutoff(g, 2, 10.0);
  const auto sp = split(op, cutoff);

  SUBCASE("A + B = L entrywise") {
    Eigen::SparseMatrix<double> diff = op.matrix() - sp.A.matrix();
    Eigen::MatrixXd dd(diff);
    for (int i = 0; i < op.size(); ++i)
      for (int j = 0; j < op.size(); ++j) {
        const double expect = (i == j) ? sp.b_diag[i] : 0.0;
        CHECK(std::abs(dd(i, j) - expect) <= 1e-14 * (1.0 + std::abs(expect)));
      }
  }
  SUBCASE("operator norm of B is M max zeta <= M") {
    CHECK(max_value(sp.b_diag) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(min_value(sp.b_diag) == 0.0);
  }
  SUBCASE("B acts diagonally: B 1 = M zeta_n") {
    for (int i = 0; i < sp.b_diag.size(); ++i)
      CHECK(sp.b_diag[i] == doctest::Approx(10.0 * cutoff.zeta[i]).epsilon(1e-15));
  }
  SUBCASE("A keeps nonnegative off-diagonals and nonpositive column sums") {
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.size());
    Eigen::VectorXd colsum = sp.A.matrix().transpose() * ones;
    for (int c = 0; c < op.size(); ++c) CHECK(colsum[c] <= 1e-12);
    const auto& m = sp.A.matrix();
    for (int c = 0; c < m.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it)
        if (it.row() != it.col()) CHECK(it.value() >= 0.0);
  }
  SUBCASE("M = 0 collapses to A = L, B = 0") {
    const auto sp0 = split(op, build_cutoff(g, 2, 0.0));
    CHECK((sp0.A.matrix() - op.matrix()).norm() == 0.0);
    CHECK(max_value(sp0.b_diag) == 0.0);
  }
}

TEST_CASE("dissipativity of S_A on the OU config") {
  auto g = build_grid(1, 12.0, 241);
  const auto op = assemble_operator(g, ForceField::linear(1));
  const WeightContext ctx(2.0, 1, 2.0);

  SUBCASE("M = 10, n = 4: positive fitted rate across seeds") {
    const auto sp = split(op, build_cutoff(g, 4, 10.0));
    const auto res = dissipativity_fit(sp, ctx, 50, 5.0, 0.01, 42);
    CHECK(res.verdict == Verdict::PASS);
    CHECK(res.omega0 > 0.0);
    CHECK(res.rates.size() == 50);
  }
  SUBCASE("fitted rate is monotone in M") {
    double prev = -1.0;
    for (double M : {1.0, 5.0, 10.0, 20.0}) {
      const auto sp = split(op, build_cutoff(g, 4, M));
      const auto res = dissipativity_fit(sp, ctx, 10, 5.0, 0.01, 99);
      CHECK(res.omega0 >= prev);
      prev = res.omega0;
    }
  }
  SUBCASE("M = 0 with zero drift fails: the constant mode does not decay") {
    const auto op0 = assemble_operator(g, ForceField::linear(1, 0.0));
    const auto sp0 = split(op0, build_cutoff(g, 4, 0.0));
    const auto res = dissipativity_fit(sp0, ctx, 5, 5.0, 0.01, 7);
    CHECK(res.verdict == Verdict::FAIL);
  }
  SUBCASE("early decay of core-supported data beats the one-cell model") {
    // f0 concentrated where zeta = 1 and E ~ 0: one implicit Euler step must
    // shrink the norm at least as fast as the single-cell absorption model
    // f' = f / (1 + dt M).
    const double M = 10.0, dt = 0.01;
    const auto sp = split(op, build_cutoff(g, 4, M));
    Stepper s(sp.A, dt);
    GridFunction f(g, 0.0);
    f[120] = 1.0;  // center cell, x = 0
    const auto f1 = s.step(f);
    const double ratio = weighted_norm(f1, 2.0, 2.0) / weighted_norm(f, 2.0, 2.0);
    CHECK(ratio <= 1.0 / (1.0 + dt * M) * 1.05);
  }
}

TEST_CASE("Duhamel residual") {
  auto g = build_grid(1, 8.0, 201);
  const auto op = assemble_operator(g, ForceField::linear(1));
  const auto sp = split(op, build_cutoff(g, 2, 10.0));
  const GridFunction f0 = gaussian_bump(g, Vec(1.0), 1.0);

  SUBCASE("M = 0: identically zero") {
    const auto sp0 = split(op, build_cutoff(g, 2, 0.0));
    CHECK(duhamel_residual(op, sp0, f0, 1.0, 0.01, 2.0) == 0.0);
  }
  SUBCASE("f0 = G: identity reduces to the stationary reconstruction") {
    const auto st = stationary(op, 1e-10, 50);
    const double r1 = duhamel_residual(op, sp, st.G, 1.0, 0.02, 2.0);
    const double r2 = duhamel_residual(op, sp, st.G, 1.0, 0.01, 2.0);
    CHECK(r1 / r2 >= 1.7);
    CHECK(r1 / r2 <= 2.3);
  }
  SUBCASE("generic data: first order in dt") {
    const double r1 = duhamel_residual(op, sp, f0, 2.0, 0.02, 2.0);
    const double r2 = duhamel_residual(op, sp, f0, 2.0, 0.01, 2.0);
    CHECK(r1 / r2 >= 1.7);
    CHECK(r1 / r2 <= 2.3);
  }
}

TEST_CASE("convolution bound") {
  auto g = build_grid(1, 8.0, 201);
  const auto op = assemble_operator(g, ForceField::linear(1));
  const WeightContext ctx(2.0, 1, 2.0);
  const auto sp = split(op, build_cutoff(g, 2, 10.0));
  const auto dis = dissipativity_fit(sp, ctx, 10, 5.0, 0.01, 42);
  REQUIRE(dis.omega0 > 0.0);

  SUBCASE("t = 0 sample has both sides zero") {
    const GridFunction f0 = gaussian_bump(g, Vec(0.5), 1.0);
    const auto rep = convolution_bound_check(sp, ctx, dis.omega0, f0, 10.0, 0.01, 20);
    REQUIRE_FALSE(rep.samples.empty());
    CHECK(rep.samples.front().t == 0.0);
    CHECK(rep.samples.front().lhs == 0.0);
    CHECK(rep.samples.front().bound == 0.0);
  }
  SUBCASE("M = 0: left side identically zero") {
    const auto sp0 = split(op, build_cutoff(g, 2, 0.0));
    const auto rep = convolution_bound_check(sp0, ctx, dis.omega0, gaussian_bump(g, Vec(0.5), 1.0),
                                             5.0, 0.01, 10);
    for (const auto& s : rep.samples) CHECK(s.lhs == 0.0);
    CHECK(rep.violations == 0);
  }
  SUBCASE("no violations over 20 seeds on the OU config") {
    Rng rng(2);
    int total = 0;
    for (int t = 0; t < 20; ++t) {
      const Vec c(rng.uniform(-4.0, 4.0));
      const auto rep = convolution_bound_check(sp, ctx, dis.omega0,
                                               gaussian_bump(g, c, rng.uniform(0.5, 2.0)),
                                               10.0, 0.01, 20);
      total += rep.violations;
    }
    CHECK(total == 0);
  }
}
