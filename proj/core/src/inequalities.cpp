#include "fpk/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpk {

GridFunction positive_part(const GridFunction& f) {
  GridFunction g = f;
  for (int i = 0; i < g.size(); ++i) g[i] = std::max(f[i], 0.0);
  return g;
}

GridFunction negative_part(const GridFunction& f) {
  GridFunction g = f;
  for (int i = 0; i < g.size(); ++i) g[i] = std::max(-f[i], 0.0);
  return g;
}

NashReport nash_check(GridPtr grid, const WeightContext& ctx, int family_size,
                      std::uint64_t seed) {
  if (!ctx.nash_admissible())
    throw ConfigError("Nash check needs k > 0 for d >= 2 and k >= 2 for d = 1");
  if (grid->dim() != ctx.d) throw ConfigError("grid and weight context dimensions differ");
  if (family_size < 1) throw ConfigError("Nash family must be nonempty");

  NashReport rep;
  rep.k = ctx.k;
  rep.d = grid->dim();
  rep.family = "gaussian_bumps";
  rep.tight_regime = (ctx.d == 2 && ctx.k < 0.5);

  const double d = grid->dim();
  Rng rng(seed);
  rep.sup_ratio = 0.0;
  for (int m = 0; m < family_size; ++m) {
    Vec c;
    c.d = grid->dim();
    for (int a = 0; a < grid->dim(); ++a)
      c[a] = rng.uniform(-0.5 * grid->half_width(), 0.5 * grid->half_width());
    const double w = rng.uniform(0.2, 2.0);
    GridFunction f = sample_on_grid(grid, [&](const Vec& x) {
      const double dx0 = x[0] - c[0];
      const double dx1 = grid->dim() == 2 ? x[1] - c[1] : 0.0;
      return std::exp(-(dx0 * dx0 + dx1 * dx1) / (2.0 * w * w));
    });
    const double l2k = weighted_norm(f, ctx.k, 2.0);
    const double l1half = weighted_norm(f, 0.5 * ctx.k, 1.0);
    const double grad = gradient_norm(f, ctx.k);
    const double ratio =
        std::pow(l2k, 2.0 + 4.0 / d) / (std::pow(l1half, 4.0 / d) * grad * grad);
    if (!std::isfinite(ratio) || ratio <= 0.0)
      throw NumericError("Nash ratio degenerate for a family member");
    rep.entries.push_back(NashEntry{c, w, ratio});
    rep.sup_ratio = std::max(rep.sup_ratio, ratio);
  }
  return rep;
}

NegpartReport negpart_coercivity_check(const OperatorMatrix& op, const WeightContext& ctx,
                                       double omega_star, double omega_inf, int trials,
                                       std::uint64_t seed, double slack_coeff) {
  const Grid& grid = op.grid();
  Rng rng(seed);
  NegpartReport rep;
  rep.omega_star = omega_star;
  rep.omega_inf = omega_inf;
  rep.trials = trials;
  rep.slack = slack_coeff * grid.spacing();
  rep.min_residual = std::numeric_limits<double>::infinity();
  rep.min_residual_h3 = std::numeric_limits<double>::infinity();

  const auto bump = [&](const Vec& c, double w) {
    return sample_on_grid(op.grid_ptr(), [&](const Vec& x) {
      const double dx0 = x[0] - c[0];
      const double dx1 = grid.dim() == 2 ? x[1] - c[1] : 0.0;
      return std::exp(-(dx0 * dx0 + dx1 * dx1) / (2.0 * w * w));
    });
  };

  for (int t = 0; t < trials; ++t) {
    Vec c1, c2;
    c1.d = c2.d = grid.dim();
    for (int a = 0; a < grid.dim(); ++a) {
      c1[a] = rng.uniform(-0.5 * grid.half_width(), 0.5 * grid.half_width());
      c2[a] = rng.uniform(-0.5 * grid.half_width(), 0.5 * grid.half_width());
    }
    const double w1 = rng.uniform(0.4, 2.0), w2 = rng.uniform(0.4, 2.0);
    const double a2 = rng.uniform(0.3, 1.5);
    GridFunction f = bump(c1, w1);
    const GridFunction g = bump(c2, w2);
    for (int i = 0; i < f.size(); ++i) f[i] -= a2 * g[i];

    const GridFunction fm = negative_part(f);
    const double m2 = weighted_norm(fm, ctx.k, 2.0);
    if (m2 * m2 <= 1e-300) continue;  // sign never flips: residual trivially 0
    const double lhs = weighted_inner(op.apply(f), fm, ctx.k);
    const double grad = gradient_norm(fm, ctx.k);
    const double base = (lhs - grad * grad) / (m2 * m2);
    rep.min_residual = std::min(rep.min_residual, base - 0.5 * omega_inf);
    rep.min_residual_h3 = std::min(rep.min_residual_h3, base - 0.5 * omega_star);
  }
  if (!std::isfinite(rep.min_residual)) {  // no trial changed sign
    rep.min_residual = 0.0;
    rep.min_residual_h3 = 0.0;
  }
  rep.verdict = rep.min_residual >= -rep.slack ? Verdict::PASS : Verdict::FAIL;
  return rep;
}

NegpartReport negpart_coercivity_check(const OperatorMatrix& op, const WeightContext& ctx,
                                       const H3Result& h3, double omega_inf, int trials,
                                       std::uint64_t seed, double slack_coeff) {
  if (h3.verdict != Verdict::PASS) {
    NegpartReport rep;
    rep.omega_star = h3.omega_star;
    rep.omega_inf = omega_inf;
    rep.verdict = Verdict::SKIPPED;
    return rep;
  }
  return negpart_coercivity_check(op, ctx, h3.omega_star, omega_inf, trials, seed, slack_coeff);
}

PositivityReport strict_positivity_check(const GridFunction& G) {
  const Grid& grid = G.grid();
  PositivityReport rep;
  rep.min_value = min_value(G);
  rep.max_value = max_value(G);
  rep.interior_threshold = 1e-3 * rep.max_value;
  rep.interior_min = std::numeric_limits<double>::infinity();
  const double core = 0.5 * grid.half_width();
  for (int i = 0; i < G.size(); ++i)
    if (grid.center(i).norm() <= core) rep.interior_min = std::min(rep.interior_min, G[i]);
  rep.interior_ok = rep.interior_min > rep.interior_threshold;
  rep.pass = rep.min_value > 0.0;
  return rep;
}

}  // namespace fpk
