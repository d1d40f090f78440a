#ifndef FPK_EVOLUTION_HPP
#define FPK_EVOLUTION_HPP

#include <Eigen/SparseLU>
#include <memory>
#include <optional>
#include <vector>

#include "fpk/operator.hpp"

namespace fpk {

/// Solves (lambda I - L_h) f = f0 by sparse LU. For lambda > 0 the matrix is
/// an M-matrix, so f0 >= 0 implies f >= 0 up to solver roundoff.
GridFunction resolvent_solve(const OperatorMatrix& op, double lambda, const GridFunction& f0);

/// Implicit Euler (default) or Crank-Nicolson stepper with a cached
/// factorization of (I - dt L_h) (resp. (I - dt/2 L_h)).
/// Crank-Nicolson is second order but not positivity preserving.
class Stepper {
public:
  Stepper(const OperatorMatrix& op, double dt, bool crank_nicolson = false);
  GridFunction step(const GridFunction& f) const;
  double dt() const { return dt_; }

private:
  const OperatorMatrix* op_;
  double dt_;
  bool cn_;
  Eigen::SparseMatrix<double> rhs_mat_;  // CN only
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

struct TrajectoryRow {
  double t{0.0};
  double mass{0.0};
  double min_value{0.0};
  double dist_l2k{0.0};   // ||f(t) - M(f0) G||_{L2_k}; 0 when no G supplied
  double norm_lpk{0.0};   // ||f(t)||_{Lp_k}
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  std::vector<GridFunction> snapshots;  // only when requested
  double k{0.0};
  double p{2.0};
  double mass0{0.0};
};

struct ObserverSpec {
  const GridFunction* G{nullptr};  // stationary state for the distance observable
  double k{2.0};
  double p{2.0};
  int stride{1};                   // record every `stride` steps
  bool store_snapshots{false};
};

Trajectory evolve(const OperatorMatrix& op, const GridFunction& f0, double T, double dt,
                  const ObserverSpec& obs, bool crank_nicolson = false);

struct DecayFit {
  double omega{0.0};
  double C{0.0};
  double t0{0.0};
  double t_end{0.0};
  double residual{0.0};      // max |fit - data| in log scale
  bool window_shrunk{false}; // underflow floor trimmed the window
};

/// Least-squares line fit of log(values) on [t0, T]; omega = -slope.
/// Values at or below the 1e-14 floor shrink the window (flagged).
DecayFit fit_exponential(std::span<const double> times, std::span<const double> values,
                         double window_fraction = 0.1);

/// Fit of the distance observable ||f(t) - M(f0) G||_{L2_k}.
DecayFit decay_fit(const Trajectory& traj, double window_fraction = 0.1);

struct LpReport {
  double p{2.0};
  double k{2.0};
  double lambda0p{0.0};
  double max_violation{0.0};  // max over samples of ||f(t)|| - e^{lambda0p t}||f0||
  bool pass{true};
};

/// Checks ||f(t)||_{Lp_k} <= e^{lambda0p t} ||f0||_{Lp_k} at every sample.
LpReport lp_monitor(const Trajectory& traj, double p, double k, double lambda0p);

}  // namespace fpk

#endif
