#include "fpk/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace fpk {

namespace {

Eigen::SparseMatrix<double> shifted_negative(const Eigen::SparseMatrix<double>& L, double eps) {
  // eps I - L
  Eigen::SparseMatrix<double> A = -L;
  Eigen::SparseMatrix<double> I(L.rows(), L.cols());
  I.setIdentity();
  return (A + eps * I).pruned();
}

double euclid_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

StationaryResult stationary(const OperatorMatrix& op, double tol, int max_iter) {
  constexpr double kShift = 1e-8;  // well below any gap scale, above exact singularity
  const int n = op.size();

  Eigen::SparseMatrix<double> A = shifted_negative(op.matrix(), kShift);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw SingularError("factorization of (eps I - L_h) failed");

  GridFunction g(op.grid_ptr(), 1.0);
  {
    const double m0 = mass(g);
    for (int i = 0; i < n; ++i) g[i] /= m0;
  }

  StationaryResult res;
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < max_iter) {
    ++it;
    Eigen::Map<const Eigen::VectorXd> v(g.values().data(), n);
    Eigen::VectorXd w = lu.solve(v);
    if (lu.info() != Eigen::Success) throw SingularError("inverse iteration solve failed");
    GridFunction next(op.grid_ptr(), std::vector<double>(w.data(), w.data() + n));
    const double m = mass(next);
    if (!(std::isfinite(m)) || m == 0.0)
      throw NumericError("inverse iteration produced zero-mass iterate");
    for (int i = 0; i < n; ++i) next[i] /= m;
    g = std::move(next);
    const GridFunction lg = op.apply(g);
    residual = euclid_norm(lg.values()) / euclid_norm(g.values());
    if (residual <= tol) break;
  }
  if (residual > tol)
    throw ConvergenceError("stationary solve stalled at residual " + std::to_string(residual));

  res.min_value = min_value(g);
  if (!(res.min_value > 0.0))
    throw NonpositiveError("converged stationary vector has a nonpositive component");
  res.G = std::move(g);
  res.residual = residual;
  res.mass = mass(res.G);
  res.iterations = it;
  return res;
}

namespace {

/// Phase-align a complex eigenvector and return its real part, oriented so
/// the mean is nonnegative and normalized to unit mass when possible.
GridFunction realize_eigenvector(const Eigen::VectorXcd& col, GridPtr grid) {
  int imax = 0;
  double amax = 0.0;
  for (int i = 0; i < col.size(); ++i) {
    const double a = std::abs(col[i]);
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  const std::complex<double> phase = col[imax] / std::abs(col[imax]);
  std::vector<double> vals(static_cast<std::size_t>(col.size()));
  for (int i = 0; i < col.size(); ++i) vals[static_cast<std::size_t>(i)] = (col[i] / phase).real();
  GridFunction v(std::move(grid), std::move(vals));
  const double m = mass(v);
  const double scale = std::abs(m) > 1e-300 ? m : euclid_norm(v.values());
  for (int i = 0; i < v.size(); ++i) v[i] /= scale;
  return v;
}

}  // namespace

EigenPair principal_eigen(const OperatorMatrix& op, int dense_limit) {
  const int n = op.size();
  EigenPair out;
  if (n <= dense_limit) {
    Eigen::MatrixXd dense(op.matrix());
    Eigen::EigenSolver<Eigen::MatrixXd> es(dense, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
    const auto& vals = es.eigenvalues();
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (vals[i].real() > vals[best].real()) best = i;
    double second = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      if (i != best) second = std::max(second, vals[i].real());
    if (vals[best].real() - second < 1e-10)
      throw DegenerateError("two eigenvalues tie for the largest real part");
    out.lambda = vals[best].real();
    out.vec = realize_eigenvector(es.eigenvectors().col(best), op.grid_ptr());
    return out;
  }

  // Large systems: shifted inverse iteration toward the eigenvalue nearest 0
  // (the principal one for these generators), Rayleigh quotient for lambda.
  StationaryResult st = stationary(op, 1e-10, 100);
  Eigen::Map<const Eigen::VectorXd> v(st.G.values().data(), n);
  Eigen::VectorXd lv = op.matrix() * v;
  out.lambda = v.dot(lv) / v.dot(v);
  out.vec = st.G;
  return out;
}

SpectrumResult spectral_gap(const OperatorMatrix& op, double mod_tol, int dense_limit) {
  const int n = op.size();
  if (n > dense_limit)
    throw SizeError("dense spectrum limited to " + std::to_string(dense_limit) + " cells");
  Eigen::MatrixXd dense(op.matrix());
  Eigen::EigenSolver<Eigen::MatrixXd> es(dense, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");

  SpectrumResult res;
  res.eigenvalues.resize(static_cast<std::size_t>(n));
  int best = 0;
  for (int i = 0; i < n; ++i) {
    res.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    if (es.eigenvalues()[i].real() > es.eigenvalues()[best].real()) best = i;
  }
  std::sort(res.eigenvalues.begin(), res.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() < b.imag();
            });

  double max_re_nonnull = -std::numeric_limits<double>::infinity();
  for (const auto& z : res.eigenvalues)
    if (std::abs(z) > mod_tol) max_re_nonnull = std::max(max_re_nonnull, z.real());
  res.gap = -max_re_nonnull;
  res.principal = es.eigenvalues()[best];

  const GridFunction v = realize_eigenvector(es.eigenvectors().col(best), op.grid_ptr());
  const double mn = min_value(v), mx = max_value(v);
  res.principal_positive = (mn > 0.0 && mx > 0.0) || (mn < 0.0 && mx < 0.0);
  return res;
}

CoercivityReport coercivity_check(const OperatorMatrix& op, const WeightContext& ctx,
                                  double lambda0_value, int trials, std::uint64_t seed,
                                  double slack_coeff) {
  const Grid& grid = op.grid();
  Rng rng(seed);
  CoercivityReport rep;
  rep.trials = trials;
  rep.slack = slack_coeff * grid.spacing();
  rep.min_residual = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Vec c;
    c.d = grid.dim();
    for (int a = 0; a < grid.dim(); ++a) c[a] = rng.uniform(-0.5 * grid.half_width(), 0.5 * grid.half_width());
    const double w = rng.uniform(0.5, 2.0);
    GridFunction phi = sample_on_grid(op.grid_ptr(), [&](const Vec& x) {
      const double dx0 = x[0] - c[0];
      const double dx1 = grid.dim() == 2 ? x[1] - c[1] : 0.0;
      return std::exp(-(dx0 * dx0 + dx1 * dx1) / (2.0 * w * w));
    });
    const double norm2 = weighted_norm(phi, ctx.k, 2.0);
    const double quad = -weighted_inner(op.apply(phi), phi, ctx.k);
    const double grad2 = gradient_norm(phi, ctx.k);
    const double value =
        (quad - grad2 * grad2 + lambda0_value * norm2 * norm2) / (norm2 * norm2);
    rep.min_residual = std::min(rep.min_residual, value);
  }
  rep.pass = rep.min_residual >= -rep.slack;
  return rep;
}

}  // namespace fpk
