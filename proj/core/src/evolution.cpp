#include "fpk/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace fpk {

namespace {

Eigen::SparseMatrix<double> identity_like(const Eigen::SparseMatrix<double>& L) {
  Eigen::SparseMatrix<double> I(L.rows(), L.cols());
  I.setIdentity();
  return I;
}

GridFunction solve_with(const Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu,
                        const OperatorMatrix& op, const Eigen::VectorXd& rhs,
                        const char* what) {
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw SingularError(std::string(what) + " solve failed");
  return GridFunction(op.grid_ptr(), std::vector<double>(x.data(), x.data() + x.size()));
}

}  // namespace

GridFunction resolvent_solve(const OperatorMatrix& op, double lambda, const GridFunction& f0) {
  if (!(lambda > 0.0)) throw ConfigError("resolvent_solve needs lambda > 0");
  Eigen::SparseMatrix<double> A = (lambda * identity_like(op.matrix()) - op.matrix()).pruned();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw SingularError("factorization of (lambda I - L_h) failed");
  Eigen::Map<const Eigen::VectorXd> rhs(f0.values().data(), f0.size());
  return solve_with(lu, op, rhs, "resolvent");
}

Stepper::Stepper(const OperatorMatrix& op, double dt, bool crank_nicolson)
    : op_(&op), dt_(dt), cn_(crank_nicolson) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const auto I = identity_like(op.matrix());
  const double a = cn_ ? 0.5 * dt : dt;
  Eigen::SparseMatrix<double> lhs = (I - a * op.matrix()).pruned();
  if (cn_) rhs_mat_ = (I + 0.5 * dt * op.matrix()).pruned();
  lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  lu_->compute(lhs);
  if (lu_->info() != Eigen::Success)
    throw SingularError("factorization of the time-step matrix failed");
}

GridFunction Stepper::step(const GridFunction& f) const {
  Eigen::Map<const Eigen::VectorXd> v(f.values().data(), f.size());
  if (cn_) {
    Eigen::VectorXd rhs = rhs_mat_ * v;
    return solve_with(*lu_, *op_, rhs, "time step");
  }
  return solve_with(*lu_, *op_, v, "time step");
}

Trajectory evolve(const OperatorMatrix& op, const GridFunction& f0, double T, double dt,
                  const ObserverSpec& obs, bool crank_nicolson) {
  if (!(T > 0.0)) throw ConfigError("final time must be positive");
  Stepper stepper(op, dt, crank_nicolson);
  const long steps = std::max<long>(1, std::lround(T / dt));

  Trajectory traj;
  traj.k = obs.k;
  traj.p = obs.p;
  traj.mass0 = mass(f0);

  GridFunction diff_ref;
  if (obs.G) {
    diff_ref = *obs.G;
    for (int i = 0; i < diff_ref.size(); ++i) diff_ref[i] *= traj.mass0;
  }

  const auto record = [&](double t, const GridFunction& f) {
    TrajectoryRow row;
    row.t = t;
    row.mass = mass(f);
    row.min_value = min_value(f);
    row.norm_lpk = weighted_norm(f, obs.k, obs.p);
    if (obs.G) {
      GridFunction d = f;
      for (int i = 0; i < d.size(); ++i) d[i] -= diff_ref[i];
      row.dist_l2k = weighted_norm(d, obs.k, 2.0);
    }
    if (!std::isfinite(row.mass) || !std::isfinite(row.norm_lpk) ||
        !std::isfinite(row.dist_l2k) || !std::isfinite(row.min_value))
      throw NumericError("non-finite observable at t = " + std::to_string(t));
    traj.rows.push_back(row);
    if (obs.store_snapshots) traj.snapshots.push_back(f);
  };

  GridFunction f = f0;
  record(0.0, f);
  const int stride = std::max(1, obs.stride);
  for (long j = 1; j <= steps; ++j) {
    f = stepper.step(f);
    if (j % stride == 0 || j == steps) record(static_cast<double>(j) * dt, f);
  }
  return traj;
}

DecayFit fit_exponential(std::span<const double> times, std::span<const double> values,
                         double window_fraction) {
  if (times.size() != values.size() || times.empty())
    throw ConfigError("fit needs matching, nonempty time/value arrays");
  constexpr double kFloor = 1e-14;
  const double T = times.back();
  const double t0 = window_fraction * T;

  DecayFit fit;
  fit.t0 = t0;
  fit.t_end = T;

  std::vector<double> ts, logs;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t0) continue;
    if (values[i] <= kFloor) {
      // Underflow floor reached: trim the window here and flag it.
      fit.window_shrunk = true;
      fit.t_end = times[i];
      break;
    }
    ts.push_back(times[i]);
    logs.push_back(std::log(values[i]));
  }
  if (ts.size() < 10)
    throw EmptyWindowError("fewer than 10 usable samples in the fit window");
  if (fit.window_shrunk) fit.t_end = ts.back();

  const double n = static_cast<double>(ts.size());
  double st = 0.0, sl = 0.0;
  for (double t : ts) st += t;
  for (double l : logs) sl += l;
  const double tbar = st / n, lbar = sl / n;
  double stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - tbar) * (ts[i] - tbar);
    stl += (ts[i] - tbar) * (logs[i] - lbar);
  }
  if (stt == 0.0) throw EmptyWindowError("degenerate fit window (single time)");
  const double slope = stl / stt;
  const double intercept = lbar - slope * tbar;
  fit.omega = -slope;
  fit.C = std::exp(intercept);
  double rmax = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    rmax = std::max(rmax, std::abs(intercept + slope * ts[i] - logs[i]));
  fit.residual = rmax;
  return fit;
}

DecayFit decay_fit(const Trajectory& traj, double window_fraction) {
  std::vector<double> ts, ds;
  ts.reserve(traj.rows.size());
  ds.reserve(traj.rows.size());
  for (const auto& r : traj.rows) {
    ts.push_back(r.t);
    ds.push_back(r.dist_l2k);
  }
  return fit_exponential(ts, ds, window_fraction);
}

LpReport lp_monitor(const Trajectory& traj, double p, double k, double lambda0p) {
  if (traj.rows.empty()) throw ConfigError("lp_monitor needs a nonempty trajectory");
  if (traj.p != p || traj.k != k)
    throw ConfigError("trajectory was recorded with different (p, k) observables");
  if (!(p >= 2.0)) throw ConfigError("lp_monitor needs p >= 2");
  LpReport rep;
  rep.p = p;
  rep.k = k;
  rep.lambda0p = lambda0p;
  const double norm0 = traj.rows.front().norm_lpk;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : traj.rows)
    worst = std::max(worst, r.norm_lpk - std::exp(lambda0p * r.t) * norm0);
  rep.max_violation = worst;
  rep.pass = worst <= 1e-12 * std::max(1.0, norm0);
  return rep;
}

}  // namespace fpk
