#ifndef FPK_INEQUALITIES_HPP
#define FPK_INEQUALITIES_HPP

#include <string>
#include <vector>

#include "fpk/operator.hpp"

namespace fpk {

struct NashEntry {
  Vec center;
  double width{1.0};
  double ratio{0.0};
};

struct NashReport {
  std::vector<NashEntry> entries;
  double sup_ratio{0.0};
  std::string family;
  double k{0.0};
  int d{1};
  bool tight_regime{false};  // d = 2 with d + k/2 - 2 <= 0 (flagged, not rejected)
};

/// Ratios ||f||^{2+4/d}_{L2_k} / ( ||f||^{4/d}_{L1_{k/2}} ||grad f||^2_{L2_k} )
/// over a family of Gaussian bumps. The sup is an empirical lower bound for
/// the Nash constant. Families are append-only in `family_size`, so the sup
/// is monotone as the family grows.
NashReport nash_check(GridPtr grid, const WeightContext& ctx, int family_size,
                      std::uint64_t seed);

struct NegpartReport {
  double min_residual{0.0};       // against omega_inf (global bound), normalized
  double min_residual_h3{0.0};    // against the H3 omega* (documents the gap)
  double omega_inf{0.0};
  double omega_star{0.0};
  double slack{0.0};
  int trials{0};
  Verdict verdict{Verdict::SKIPPED};
};

/// Residuals of (L_h f | f^-)_k >= ||grad f^-||_k^2 + (omega/2) ||f^-||_k^2
/// on random sign-changing test functions. PASS is gauged against
/// omega_inf (infimum of the H3 integrand over the whole sweep); the
/// omega*-restricted residual is reported alongside.
NegpartReport negpart_coercivity_check(const OperatorMatrix& op, const WeightContext& ctx,
                                       double omega_star, double omega_inf, int trials,
                                       std::uint64_t seed, double slack_coeff = 2.0);

/// H3-gated variant: returns a SKIPPED report when the hypothesis failed.
NegpartReport negpart_coercivity_check(const OperatorMatrix& op, const WeightContext& ctx,
                                       const H3Result& h3, double omega_inf, int trials,
                                       std::uint64_t seed, double slack_coeff = 2.0);

struct PositivityReport {
  double min_value{0.0};
  double max_value{0.0};
  double interior_min{0.0};
  double interior_threshold{0.0};  // 1e-3 max G
  bool interior_ok{false};         // interior_min above the threshold (diagnostic)
  bool pass{false};                // min G > 0 strictly everywhere
};

/// Strict positivity: PASS iff min G > 0 strictly everywhere. The core-region
/// statistic (min over |x| <= r_dom/2 against 1e-3 max G) is reported as a
/// diagnostic; a Gaussian-type state already falls below it at |x| = 4.
PositivityReport strict_positivity_check(const GridFunction& G);

/// Cellwise positive/negative parts (f = f+ - f-, f+ f- = 0).
GridFunction positive_part(const GridFunction& f);
GridFunction negative_part(const GridFunction& f);

}  // namespace fpk

#endif
