#ifndef FPK_SPECTRAL_HPP
#define FPK_SPECTRAL_HPP

#include <complex>
#include <vector>

#include "fpk/operator.hpp"

namespace fpk {

struct StationaryResult {
  GridFunction G;
  double residual{0.0};   // ||L_h G||_2 / ||G||_2
  double min_value{0.0};
  double mass{0.0};
  int iterations{0};
};

/// Stationary state by inverse power iteration on (eps I - L_h)^{-1},
/// eps = 1e-8, started from the positive constant vector and renormalized to
/// unit mass each sweep.
StationaryResult stationary(const OperatorMatrix& op, double tol = 1e-10, int max_iter = 50);

struct EigenPair {
  double lambda{0.0};
  GridFunction vec;
};

/// Eigenvalue of largest real part with its eigenvector (dense path up to
/// `dense_limit` cells, shifted inverse iteration beyond).
EigenPair principal_eigen(const OperatorMatrix& op, int dense_limit = 10000);

struct SpectrumResult {
  std::vector<std::complex<double>> eigenvalues;
  double gap{0.0};  // a* = -max{ Re l : |l| > mod_tol }
  std::complex<double> principal{0.0, 0.0};
  bool principal_positive{false};
};

SpectrumResult spectral_gap(const OperatorMatrix& op, double mod_tol = 1e-6,
                            int dense_limit = 10000);

struct CoercivityReport {
  double min_residual{0.0};  // min over trials, normalized by ||phi||_k^2
  double slack{0.0};         // tolerance -C h actually applied
  int trials{0};
  bool pass{false};
};

/// Checks (-L_h phi | phi)_k >= ||grad phi||_k^2 - lambda0 ||phi||_k^2 on
/// random Gaussian bumps, up to O(h) slack.
CoercivityReport coercivity_check(const OperatorMatrix& op, const WeightContext& ctx,
                                  double lambda0_value, int trials, std::uint64_t seed,
                                  double slack_coeff = 0.5);

}  // namespace fpk

#endif
