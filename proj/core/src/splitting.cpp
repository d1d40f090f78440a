#include "fpk/splitting.hpp"

#include <algorithm>
#include <cmath>

namespace fpk {

double zeta0(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double u = s - 1.0;
  return 1.0 - (3.0 * u * u - 2.0 * u * u * u);
}

double zeta0_prime(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double u = s - 1.0;
  return -6.0 * u * (1.0 - u);
}

CutoffSpec build_cutoff(GridPtr grid, int n, double M) {
  if (n <= 0) throw ConfigError("cutoff scale n must be a positive integer");
  if (M < 0.0) throw ConfigError("cutoff amplitude M must be nonnegative");
  CutoffSpec spec;
  spec.n = n;
  spec.M = M;
  spec.support_truncated = (2.0 * n >= grid->half_width());
  spec.zeta = sample_on_grid(grid, [&](const Vec& x) { return zeta0(x.norm() / n); });
  return spec;
}

SplitOperator split(const OperatorMatrix& op, const CutoffSpec& cutoff) {
  if (cutoff.zeta.size() != op.size()) throw ConfigError("cutoff built on a different grid");
  const int n = op.size();
  GridFunction b(op.grid_ptr());
  for (int i = 0; i < n; ++i) b[i] = cutoff.M * cutoff.zeta[i];

  Eigen::SparseMatrix<double> diag(n, n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    if (b[i] != 0.0) trip.emplace_back(i, i, b[i]);
  diag.setFromTriplets(trip.begin(), trip.end());

  Eigen::SparseMatrix<double> amat = (op.matrix() - diag).pruned();
  amat.makeCompressed();
  OperatorMatrix A(op.grid_ptr(), std::move(amat), op.faces(), op.scheme() + "_absorbed",
                   op.field_desc());
  return SplitOperator{std::move(A), std::move(b), cutoff.M, cutoff.n};
}

namespace {

GridFunction random_bump(GridPtr grid, Rng& rng) {
  const double R = grid->half_width();
  Vec c;
  c.d = grid->dim();
  for (int a = 0; a < grid->dim(); ++a) c[a] = rng.uniform(-0.5 * R, 0.5 * R);
  const double w = rng.uniform(0.5, 2.0);
  return sample_on_grid(grid, [&](const Vec& x) {
    const double dx0 = x[0] - c[0];
    const double dx1 = grid->dim() == 2 ? x[1] - c[1] : 0.0;
    return std::exp(-(dx0 * dx0 + dx1 * dx1) / (2.0 * w * w));
  });
}

}  // namespace

DissipativityResult dissipativity_fit(const SplitOperator& sp, const WeightContext& ctx,
                                      int trials, double T, double dt, std::uint64_t seed) {
  Stepper stepper(sp.A, dt);
  const long steps = std::max<long>(1, std::lround(T / dt));
  Rng rng(seed);

  DissipativityResult res;
  res.rates.reserve(static_cast<std::size_t>(trials));
  bool any_growth = false;
  for (int t = 0; t < trials; ++t) {
    GridFunction f = random_bump(sp.A.grid_ptr(), rng);
    std::vector<double> times(static_cast<std::size_t>(steps) + 1);
    std::vector<double> norms(static_cast<std::size_t>(steps) + 1);
    times[0] = 0.0;
    norms[0] = weighted_norm(f, ctx.k, 2.0);
    for (long j = 1; j <= steps; ++j) {
      f = stepper.step(f);
      times[static_cast<std::size_t>(j)] = static_cast<double>(j) * dt;
      norms[static_cast<std::size_t>(j)] = weighted_norm(f, ctx.k, 2.0);
    }
    if (norms.back() >= norms.front()) any_growth = true;
    const DecayFit fit = fit_exponential(times, norms);
    res.rates.push_back(fit.omega);
  }
  res.omega0 = *std::min_element(res.rates.begin(), res.rates.end());
  res.verdict = (!any_growth && res.omega0 > 0.0) ? Verdict::PASS : Verdict::FAIL;
  return res;
}

double duhamel_residual(const OperatorMatrix& op, const SplitOperator& sp,
                        const GridFunction& f0, double T, double dt, double k) {
  Stepper step_L(op, dt);
  Stepper step_A(sp.A, dt);
  const long steps = std::max<long>(1, std::lround(T / dt));

  const auto apply_B = [&](const GridFunction& f) {
    GridFunction g = f;
    for (int i = 0; i < g.size(); ++i) g[i] *= sp.b_diag[i];
    return g;
  };

  // Trapezoidal Horner pass over the step grid:
  //   acc_N = sum_j w_j S_A^{N-j} B S_L^j f0,  w = dt (1/2, 1, ..., 1, 1/2).
  GridFunction f_L = f0;       // S_L^j f0
  GridFunction u_A = f0;       // S_A^j f0
  GridFunction acc = apply_B(f0);
  for (int i = 0; i < acc.size(); ++i) acc[i] *= 0.5 * dt;
  for (long j = 1; j <= steps; ++j) {
    f_L = step_L.step(f_L);
    u_A = step_A.step(u_A);
    acc = step_A.step(acc);
    GridFunction g = apply_B(f_L);
    const double w = (j == steps) ? 0.5 * dt : dt;
    for (int i = 0; i < acc.size(); ++i) acc[i] += w * g[i];
  }

  GridFunction r = f_L;
  for (int i = 0; i < r.size(); ++i) r[i] -= u_A[i] + acc[i];
  return weighted_norm(r, k, 2.0);
}

ConvolutionBoundReport convolution_bound_check(const SplitOperator& sp, const WeightContext& ctx,
                                               double omega0, const GridFunction& f0, double T,
                                               double dt, int sample_count) {
  if (!(omega0 > 0.0)) throw ConfigError("convolution bound check needs omega0 > 0");
  Stepper step_A(sp.A, dt);
  const long steps = std::max<long>(1, std::lround(T / dt));
  const long stride = std::max<long>(1, steps / std::max(1, sample_count));

  const auto apply_B = [&](const GridFunction& f) {
    GridFunction g = f;
    for (int i = 0; i < g.size(); ++i) g[i] *= sp.b_diag[i];
    return g;
  };

  const double norm_f0 = weighted_norm(f0, ctx.k, 2.0);

  // Forward pass: w_m = S_A^m f0, and the trapezoidal convolution
  //   v_{m+1} = S_A (v_m + dt/2 B w_m) + dt/2 B w_{m+1}.
  GridFunction w = f0;
  GridFunction v(sp.A.grid_ptr(), 0.0);
  double calib = 1.0;
  std::vector<std::pair<double, double>> lhs_at;  // (t, ||v||)
  for (long m = 0; m <= steps; ++m) {
    const double t = static_cast<double>(m) * dt;
    calib = std::max(calib, weighted_norm(w, ctx.k, 2.0) / (std::exp(-omega0 * t) * norm_f0));
    if (m % stride == 0 || m == steps)
      lhs_at.emplace_back(t, weighted_norm(v, ctx.k, 2.0));
    if (m == steps) break;
    GridFunction g = apply_B(w);
    for (int i = 0; i < v.size(); ++i) v[i] += 0.5 * dt * g[i];
    v = step_A.step(v);
    w = step_A.step(w);
    GridFunction g2 = apply_B(w);
    for (int i = 0; i < v.size(); ++i) v[i] += 0.5 * dt * g2[i];
  }

  ConvolutionBoundReport rep;
  rep.calibration_C = calib;
  rep.omega0 = omega0;
  for (const auto& [t, lhs] : lhs_at) {
    ConvolutionSample s;
    s.t = t;
    s.lhs = lhs;
    s.bound = calib * calib * sp.M * t * std::exp(-omega0 * t) * norm_f0;
    if (s.lhs > s.bound) ++rep.violations;
    rep.samples.push_back(s);
  }
  return rep;
}

}  // namespace fpk
