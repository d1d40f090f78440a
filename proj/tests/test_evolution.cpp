#include <doctest.h>

#include <cmath>

#include "fpk/evolution.hpp"
#include "fpk/spectral.hpp"
#include "test_support.hpp"

using namespace fpk;
using namespace fpk::test;

namespace {

struct OuSetup {
  GridPtr grid = build_grid(1, 8.0, 401);
  OperatorMatrix op = assemble_operator(grid, ForceField::linear(1));
  StationaryResult st = stationary(op, 1e-10, 50);
};

}  // namespace

TEST_CASE("resolvent identities") {
  OuSetup ou;
  SUBCASE("f0 = G gives G / lambda") {
    for (double lam : {0.3, 1.0, 4.0}) {
      const auto f = resolvent_solve(ou.op, lam, ou.st.G);
      double dmax = 0.0;
      for (int i = 0; i < f.size(); ++i)
        dmax = std::max(dmax, std::abs(f[i] - ou.st.G[i] / lam));
      CHECK(dmax <= 1e-12);
    }
  }
  SUBCASE("indicator: nonnegative solution with mass(f0)/lambda") {
    GridFunction ind(ou.grid, 0.0);
    ind[200] = 1.0;
    const auto f = resolvent_solve(ou.op, 1.0, ind);
    CHECK(min_value(f) >= -1e-12);
    CHECK(mass(f) == doctest::Approx(mass(ind)).epsilon(1e-12));
  }
  SUBCASE("random nonnegative data stays nonnegative at lambda = 0.3") {
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
      GridFunction r(ou.grid);
      for (int i = 0; i < r.size(); ++i) r[i] = rng.uniform01();
      CHECK(min_value(resolvent_solve(ou.op, 0.3, r)) >= -1e-12);
    }
  }
  SUBCASE("nonpositive lambda is rejected") {
    CHECK_THROWS_AS(resolvent_solve(ou.op, 0.0, ou.st.G), ConfigError);
    CHECK_THROWS_AS(resolvent_solve(ou.op, -1.0, ou.st.G), ConfigError);
  }
}

TEST_CASE("implicit Euler step: fixed point, mass, positivity") {
  OuSetup ou;
  Stepper stepper(ou.op, 0.05);

  SUBCASE("G is a fixed point") {
    const auto g1 = stepper.step(ou.st.G);
    double dmax = 0.0;
    for (int i = 0; i < g1.size(); ++i) dmax = std::max(dmax, std::abs(g1[i] - ou.st.G[i]));
    CHECK(dmax <= 1e-10 * max_value(ou.st.G));
  }
  SUBCASE("mass conserved and positivity preserved over 1000 steps") {
    const GridFunction f0 = sample_on_grid(ou.grid, [](const Vec& x) {
      return std::exp(-0.5 * (x[0] - 2.0) * (x[0] - 2.0)) / std::sqrt(2.0 * M_PI);
    });
    ObserverSpec obs;
    obs.G = &ou.st.G;
    obs.k = 2.0;
    obs.p = 2.0;
    const auto traj = evolve(ou.op, f0, 10.0, 0.01, obs);
    const double m0 = traj.rows.front().mass;
    double min_over_traj = 1e300;
    for (const auto& r : traj.rows) {
      CHECK(std::abs(r.mass - m0) <= 1e-10 * std::abs(m0));
      min_over_traj = std::min(min_over_traj, r.min_value);
    }
    CHECK(min_over_traj >= -1e-12);
  }
}

TEST_CASE("zero drift relaxes to the uniform state monotonically") {
  auto g = build_grid(1, 8.0, 101);
  const auto op = assemble_operator(g, ForceField::linear(1, 0.0));
  const auto st = stationary(op, 1e-10, 50);
  const GridFunction f0 = normalized(gaussian_bump(g, Vec(2.0), 0.7));
  ObserverSpec obs;
  obs.G = &st.G;
  obs.k = 2.0;
  obs.p = 2.0;
  // the no-flux Laplacian gap is (pi/16)^2, so equilibration needs T ~ 200
  const auto traj = evolve(op, f0, 200.0, 0.05, obs);
  for (std::size_t i = 1; i < traj.rows.size(); ++i)
    CHECK(traj.rows[i].dist_l2k <= traj.rows[i - 1].dist_l2k * (1.0 + 1e-12));
  CHECK(traj.rows.back().dist_l2k <= 1e-3 * traj.rows.front().dist_l2k);
}

TEST_CASE("distance to equilibrium decays monotonically on the OU config") {
  OuSetup ou;
  const GridFunction f0 = sample_on_grid(ou.grid, [](const Vec& x) {
    return std::exp(-0.5 * (x[0] - 2.0) * (x[0] - 2.0)) / std::sqrt(2.0 * M_PI);
  });
  ObserverSpec obs;
  obs.G = &ou.st.G;
  obs.k = 2.0;
  obs.p = 2.0;
  for (double dt : {0.1, 0.02}) {
    const auto traj = evolve(ou.op, f0, 8.0, dt, obs);
    for (std::size_t i = 1; i < traj.rows.size(); ++i)
      CHECK(traj.rows[i].dist_l2k <= traj.rows[i - 1].dist_l2k * (1.0 + 1e-12));
  }
}

TEST_CASE("first-order accuracy: halving dt halves the error") {
  OuSetup ou;
  const GridFunction f0 = sample_on_grid(ou.grid, [](const Vec& x) {
    return std::exp(-0.5 * (x[0] - 2.0) * (x[0] - 2.0));
  });
  const auto advance = [&](double dt) {
    Stepper s(ou.op, dt);
    GridFunction u = f0;
    const long m = std::lround(1.0 / dt);
    for (long j = 0; j < m; ++j) u = s.step(u);
    return u;
  };
  // reference at dt/8 of the halved step, i.e. dt/16 of the coarse one
  const auto ref = advance(0.02 / 16.0);
  const auto u1 = advance(0.02);
  const auto u2 = advance(0.01);
  double e1 = 0.0, e2 = 0.0;
  for (int i = 0; i < ref.size(); ++i) {
    e1 = std::max(e1, std::abs(u1[i] - ref[i]));
    e2 = std::max(e2, std::abs(u2[i] - ref[i]));
  }
  const double ratio = e1 / e2;
  CHECK(ratio >= 1.7);
  CHECK(ratio <= 2.3);
}

TEST_CASE("Crank-Nicolson stepper conserves mass") {
  OuSetup ou;
  Stepper cn(ou.op, 0.01, /*crank_nicolson=*/true);
  GridFunction u = sample_on_grid(ou.grid, [](const Vec& x) {
    return std::exp(-0.5 * (x[0] - 1.0) * (x[0] - 1.0));
  });
  const double m0 = mass(u);
  for (int j = 0; j < 200; ++j) u = cn.step(u);
  CHECK(mass(u) == doctest::Approx(m0).epsilon(1e-12));
}

TEST_CASE("decay fit") {
  SUBCASE("synthetic exponential is recovered exactly") {
    std::vector<double> ts, vs;
    for (int i = 0; i <= 200; ++i) {
      ts.push_back(0.05 * i);
      vs.push_back(3.5 * std::exp(-2.0 * 0.05 * i));
    }
    const auto fit = fit_exponential(ts, vs);
    CHECK(fit.omega == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.C == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(fit.residual <= 1e-12);
    CHECK_FALSE(fit.window_shrunk);
  }
  SUBCASE("underflow floor shrinks the window and flags it") {
    std::vector<double> ts, vs;
    for (int i = 0; i <= 100; ++i) {
      ts.push_back(0.1 * i);
      vs.push_back(std::exp(-5.0 * 0.1 * i));
    }
    for (std::size_t i = 60; i < vs.size(); ++i) vs[i] = 1e-15;  // below the 1e-14 floor
    const auto fit = fit_exponential(ts, vs);
    CHECK(fit.window_shrunk);
    CHECK(fit.t_end < 6.01);
    CHECK(fit.omega == doctest::Approx(5.0).epsilon(1e-9));
  }
  SUBCASE("equilibrium start exhausts the window") {
    OuSetup ou;
    ObserverSpec obs;
    obs.G = &ou.st.G;
    obs.k = 2.0;
    obs.p = 2.0;
    const auto traj = evolve(ou.op, ou.st.G, 2.0, 0.01, obs);
    CHECK_THROWS_AS(decay_fit(traj), EmptyWindowError);
  }
}

TEST_CASE("Lp growth monitor") {
  OuSetup ou;
  SUBCASE("f0 = G: constant norm satisfies any nonnegative rate") {
    ObserverSpec obs;
    obs.G = &ou.st.G;
    obs.k = 2.0;
    obs.p = 2.0;
    const auto traj = evolve(ou.op, ou.st.G, 1.0, 0.01, obs);
    const auto rep = lp_monitor(traj, 2.0, 2.0, 0.0);
    CHECK(rep.pass);
    CHECK(rep.max_violation <= 1e-12);
  }
  SUBCASE("zero drift: p = 2 norm is non-increasing, so lambda0p = 0 works") {
    auto g = build_grid(1, 8.0, 101);
    const auto op0 = assemble_operator(g, ForceField::linear(1, 0.0));
    ObserverSpec obs;
    obs.k = 2.0;
    obs.p = 2.0;
    const auto traj = evolve(op0, normalized(gaussian_bump(g, Vec(1.0), 0.8)), 5.0, 0.05, obs);
    CHECK(lp_monitor(traj, 2.0, 2.0, 0.0).pass);
  }
  SUBCASE("OU at p = 4, k = 2 over t in [0, 10]") {
    ObserverSpec obs;
    obs.G = &ou.st.G;
    obs.k = 2.0;
    obs.p = 4.0;
    const GridFunction f0 = sample_on_grid(ou.grid, [](const Vec& x) {
      return std::exp(-0.5 * (x[0] - 2.0) * (x[0] - 2.0)) / std::sqrt(2.0 * M_PI);
    });
    const auto traj = evolve(ou.op, f0, 10.0, 0.02, obs);
    // lambda0(p=4): beta0(4) = -3 at the origin, bracket max = kd - beta0 = 5
    const auto h2 = check_h2(ForceField::linear(1), WeightContext(2.0, 1, 4.0), SweepSpec{});
    CHECK(h2.beta0 == doctest::Approx(-3.0).epsilon(1e-12));
    const double lam0p = lambda0(h2.beta0, WeightContext(2.0, 1, 4.0)).value;
    CHECK(lam0p == doctest::Approx(5.0).epsilon(1e-12));
    const auto rep = lp_monitor(traj, 4.0, 2.0, lam0p);
    CHECK(rep.pass);
    CHECK(rep.max_violation <= 0.0);
  }
  SUBCASE("mismatched observables are rejected") {
    ObserverSpec obs;
    obs.G = &ou.st.G;
    obs.k = 2.0;
    obs.p = 2.0;
    const auto traj = evolve(ou.op, ou.st.G, 0.5, 0.05, obs);
    CHECK_THROWS_AS(lp_monitor(traj, 4.0, 2.0, 1.0), ConfigError);
  }
}

TEST_CASE("evolve validates inputs and observables") {
  OuSetup ou;
  ObserverSpec obs;
  obs.k = 2.0;
  obs.p = 2.0;
  CHECK_THROWS_AS(evolve(ou.op, ou.st.G, -1.0, 0.01, obs), ConfigError);
  CHECK_THROWS_AS(Stepper(ou.op, 0.0), ConfigError);
  CHECK_THROWS_AS(Stepper(ou.op, -0.1), ConfigError);
  // strictly increasing sample times with stride
  obs.stride = 7;
  const auto traj = evolve(ou.op, ou.st.G, 1.0, 0.01, obs);
  for (std::size_t i = 1; i < traj.rows.size(); ++i)
    CHECK(traj.rows[i].t > traj.rows[i - 1].t);
  CHECK(traj.snapshots.empty());
  // snapshot storage on request
  obs.stride = 10;
  obs.store_snapshots = true;
  const auto traj2 = evolve(ou.op, ou.st.G, 0.5, 0.01, obs);
  CHECK(traj2.snapshots.size() == traj2.rows.size());
  for (const auto& s : traj2.snapshots) CHECK(s.size() == ou.st.G.size());
}
