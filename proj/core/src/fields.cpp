#include "fpk/fields.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace fpk {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericError(std::string(what) + " is not finite");
}

double poly_eval(const std::vector<Monomial>& terms, const Vec& x) {
  double s = 0.0;
  for (const Monomial& m : terms) {
    double t = m.coeff;
    for (int a = 0; a < m.powers[0]; ++a) t *= x[0];
    for (int b = 0; b < m.powers[1]; ++b) t *= x[1];
    s += t;
  }
  return s;
}

double poly_partial(const std::vector<Monomial>& terms, const Vec& x, int axis) {
  double s = 0.0;
  for (const Monomial& m : terms) {
    const int pw = m.powers[static_cast<std::size_t>(axis)];
    if (pw == 0) continue;
    double t = m.coeff * pw;
    const int pa = axis == 0 ? pw - 1 : m.powers[0];
    const int pb = axis == 1 ? pw - 1 : m.powers[1];
    for (int a = 0; a < pa; ++a) t *= x[0];
    for (int b = 0; b < pb; ++b) t *= x[1];
    s += t;
  }
  return s;
}

}  // namespace

const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::gradient_power: return "gradient_power";
    case FieldKind::linear: return "linear";
    case FieldKind::gradient_power_plus_rotation: return "gradient_power_plus_rotation";
    default: return "custom_polynomial";
  }
}

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "gradient_power") return FieldKind::gradient_power;
  if (s == "linear") return FieldKind::linear;
  if (s == "gradient_power_plus_rotation") return FieldKind::gradient_power_plus_rotation;
  if (s == "custom_polynomial") return FieldKind::custom_polynomial;
  throw ConfigError("unknown field kind '" + s + "'");
}

ForceField ForceField::gradient_power(int d, double gamma) {
  if (d != 1 && d != 2) throw ConfigError("field dimension must be 1 or 2");
  if (!(gamma > 1.0 && gamma <= 2.0)) throw ConfigError("gradient_power needs gamma in (1, 2]");
  ForceField f(FieldKind::gradient_power, d);
  f.gamma_ = gamma;
  return f;
}

ForceField ForceField::linear(int d, double coeff) {
  if (d != 1 && d != 2) throw ConfigError("field dimension must be 1 or 2");
  ForceField f(FieldKind::linear, d);
  f.coeff_ = coeff;
  return f;
}

ForceField ForceField::gradient_power_plus_rotation(double gamma, double theta) {
  if (!(gamma > 1.0 && gamma <= 2.0))
    throw ConfigError("gradient_power_plus_rotation needs gamma in (1, 2]");
  ForceField f(FieldKind::gradient_power_plus_rotation, 2);
  f.gamma_ = gamma;
  f.theta_ = theta;
  return f;
}

ForceField ForceField::polynomial(int d, std::vector<Monomial> ex, std::vector<Monomial> ey) {
  if (d != 1 && d != 2) throw ConfigError("field dimension must be 1 or 2");
  if (d == 1 && !ey.empty()) throw ConfigError("1-d polynomial field has a single component");
  for (const auto& terms : {ex, ey})
    for (const Monomial& m : terms)
      if (m.powers[0] < 0 || m.powers[1] < 0) throw ConfigError("negative monomial power");
  ForceField f(FieldKind::custom_polynomial, d);
  f.poly_[0] = std::move(ex);
  f.poly_[1] = std::move(ey);
  return f;
}

Vec ForceField::eval(const Vec& x) const {
  Vec e;
  e.d = d_;
  switch (kind_) {
    case FieldKind::gradient_power: {
      const double w = std::pow(1.0 + x.norm_sq(), 0.5 * (gamma_ - 2.0));
      e = w * x;
      break;
    }
    case FieldKind::linear:
      e = coeff_ * x;
      break;
    case FieldKind::gradient_power_plus_rotation: {
      const double r2 = x.norm_sq();
      const double w = std::pow(1.0 + r2, 0.5 * (gamma_ - 2.0));
      e = Vec(w * x[0] - theta_ * x[1] / (1.0 + r2), w * x[1] + theta_ * x[0] / (1.0 + r2));
      break;
    }
    case FieldKind::custom_polynomial:
      e[0] = poly_eval(poly_[0], x);
      if (d_ == 2) e[1] = poly_eval(poly_[1], x);
      break;
  }
  e.d = d_;
  return e;
}

double ForceField::divergence(const Vec& x) const {
  switch (kind_) {
    case FieldKind::gradient_power:
    case FieldKind::gradient_power_plus_rotation: {
      // div E0 = d <x>^{gamma-2} + (gamma-2)|x|^2 <x>^{gamma-4}; the rotation
      // part is divergence free.
      const double r2 = x.norm_sq();
      return d_ * std::pow(1.0 + r2, 0.5 * (gamma_ - 2.0)) +
             (gamma_ - 2.0) * r2 * std::pow(1.0 + r2, 0.5 * (gamma_ - 4.0));
    }
    case FieldKind::linear:
      return coeff_ * d_;
    case FieldKind::custom_polynomial: {
      double s = poly_partial(poly_[0], x, 0);
      if (d_ == 2) s += poly_partial(poly_[1], x, 1);
      return s;
    }
  }
  return 0.0;
}

std::string ForceField::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(d=" << d_;
  switch (kind_) {
    case FieldKind::gradient_power: os << ",gamma=" << gamma_; break;
    case FieldKind::linear: os << ",coeff=" << coeff_; break;
    case FieldKind::gradient_power_plus_rotation:
      os << ",gamma=" << gamma_ << ",theta=" << theta_;
      break;
    case FieldKind::custom_polynomial:
      os << ",terms=" << poly_[0].size() + poly_[1].size();
      break;
  }
  os << ")";
  return os.str();
}

WeightContext::WeightContext(double k_, int d_, double p_) : k(k_), d(d_), p(p_) {
  if (k < 0.0) throw ConfigError("weight exponent k must be >= 0");
  if (d != 1 && d != 2) throw ConfigError("dimension must be 1 or 2");
  if (p < 2.0) throw ConfigError("Lebesgue exponent p must be in [2, inf)");
}

double weight(const Vec& x, double k) { return std::pow(1.0 + x.norm_sq(), 0.5 * k); }

Vec grad_weight(const Vec& x, double k) {
  const double r2 = x.norm_sq();
  return (k / (1.0 + r2) * std::pow(1.0 + r2, 0.5 * k)) * x;
}

double laplace_weight(const Vec& x, double k) {
  const int d = x.d;
  const double r2 = x.norm_sq();
  const double one = 1.0 + r2;
  return (k * d + k * (k + d - 2.0) * r2) / (one * one) * std::pow(one, 0.5 * k);
}

double h2_integrand(const ForceField& E, const Vec& x, const WeightContext& ctx) {
  const double r2 = x.norm_sq();
  return -(ctx.p / ctx.p_conj()) * E.divergence(x) + ctx.k * x.dot(E.eval(x)) / (1.0 + r2);
}

double h3_integrand(const ForceField& E, const Vec& x, const WeightContext& ctx) {
  const double r2 = x.norm_sq();
  const double one = 1.0 + r2;
  const double wterm = (ctx.k * ctx.d + ctx.k * (ctx.k + ctx.d - 2.0) * r2) / (one * one);
  return -wterm + h2_integrand(E, x, ctx);
}

double psi_k_over_weight(const ForceField& E, const Vec& x, const WeightContext& ctx) {
  if (ctx.p != 2.0) throw ConfigError("Psi_k/<x>^k quotient is the p = 2 specialization");
  return h3_integrand(E, x, ctx);
}

double subeigen_integrand(const ForceField& E, const Vec& x, double alpha0) {
  const double r2 = x.norm_sq();
  const double one = 1.0 + r2;
  return (alpha0 * (alpha0 + 2.0 - E.dim()) * r2 - alpha0 * E.dim()) / (one * one) +
         alpha0 * x.dot(E.eval(x)) / one;
}

// ---------------------------------------------------------------------------
// sampling sweeps
// ---------------------------------------------------------------------------

namespace {

std::vector<Vec> sweep_directions(int d, const SweepSpec& sweep) {
  if (d == 1) return {Vec(1.0), Vec(-1.0)};
  std::vector<Vec> dirs;
  const int m = std::max(4, sweep.angular_samples);
  dirs.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double phi = 2.0 * kPi * j / m;
    dirs.emplace_back(std::cos(phi), std::sin(phi));
  }
  return dirs;
}

struct SweepExtremum {
  double value{0.0};
  Vec arg;
};

/// Minimum of g over { r * dir : r in [r_lo, r_hi], dir in directions },
/// radially refined along the best direction.
SweepExtremum sweep_min(const std::function<double(const Vec&)>& g, int d,
                        const SweepSpec& sweep, double r_lo, double r_hi) {
  const auto dirs = sweep_directions(d, sweep);
  const int nr = std::max(2, sweep.radial_samples);
  double best = std::numeric_limits<double>::infinity();
  double best_r = r_lo;
  Vec best_dir = dirs.front();
  for (const Vec& dir : dirs) {
    for (int i = 0; i < nr; ++i) {
      const double r = r_lo + (r_hi - r_lo) * static_cast<double>(i) / (nr - 1);
      const double v = g(r * dir);
      require_finite(v, "sweep integrand");
      if (v < best) {
        best = v;
        best_r = r;
        best_dir = dir;
      }
    }
  }
  const double step = (r_hi - r_lo) / (nr - 1);
  double arg_r = best_r;
  const double refined = refine_min([&](double r) { return g(r * best_dir); }, best_r, r_lo,
                                    r_hi, step, &arg_r);
  SweepExtremum out;
  out.value = std::min(best, refined);
  out.arg = arg_r * best_dir;
  out.arg.d = d;
  return out;
}

SweepExtremum sweep_max(const std::function<double(const Vec&)>& g, int d,
                        const SweepSpec& sweep, double r_lo, double r_hi) {
  SweepExtremum m = sweep_min([&](const Vec& x) { return -g(x); }, d, sweep, r_lo, r_hi);
  m.value = -m.value;
  return m;
}

}  // namespace

H1Result check_h1(const ForceField& E, double gamma, double gamma2, const SweepSpec& sweep) {
  if (!(1.0 < gamma && gamma <= gamma2 && gamma2 <= 2.0))
    throw ConfigError("check_H1 needs 1 < gamma <= gamma2 <= 2");
  if (sweep.r_max <= 1.0) throw ConfigError("check_H1 sweep must extend beyond |x| = 1");

  H1Result res;
  res.gamma = gamma;
  res.gamma2 = gamma2;

  const auto dirs = sweep_directions(E.dim(), sweep);
  const int nr = std::max(2, sweep.radial_samples);

  // Pass 1: constants from the near/far split.
  double max_negdot_core = -std::numeric_limits<double>::infinity();  // sup_{|x|<=1} -x.E
  double max_excess_core = -std::numeric_limits<double>::infinity();  // sup_{|x|<=1} x.E - r^g2
  for (const Vec& dir : dirs) {
    for (int i = 0; i < nr; ++i) {
      const double r = sweep.r_max * static_cast<double>(i) / (nr - 1);
      if (r > 1.0) break;
      const Vec x = r * dir;
      const double xe = x.dot(E.eval(x));
      require_finite(xe, "x.E");
      max_negdot_core = std::max(max_negdot_core, -xe);
      max_excess_core = std::max(max_excess_core, xe - std::pow(r, gamma2));
    }
  }
  res.beta = std::max(0.0, max_negdot_core);
  res.beta2 = std::max(0.0, max_excess_core);

  double alpha = std::numeric_limits<double>::infinity();
  double alpha2 = -std::numeric_limits<double>::infinity();
  for (const Vec& dir : dirs) {
    for (int i = 0; i < nr; ++i) {
      const double r = sweep.r_max * static_cast<double>(i) / (nr - 1);
      if (r < 1.0) continue;
      const Vec x = r * dir;
      const double xe = x.dot(E.eval(x));
      alpha = std::min(alpha, (xe + res.beta) / std::pow(r, gamma));
      alpha2 = std::max(alpha2, (xe - res.beta2) / std::pow(r, gamma2));
    }
  }
  res.alpha = alpha;
  res.alpha2 = alpha2;

  // Pass 2: repair the offsets so the extracted pair validates at every
  // sampled point (the recipe alone does not cover mid-ball samples).
  double raise_beta = 0.0, raise_beta2 = 0.0;
  for (const Vec& dir : dirs) {
    for (int i = 0; i < nr; ++i) {
      const double r = sweep.r_max * static_cast<double>(i) / (nr - 1);
      const Vec x = r * dir;
      const double xe = x.dot(E.eval(x));
      raise_beta = std::max(raise_beta, res.alpha * std::pow(r, gamma) - xe);
      raise_beta2 = std::max(raise_beta2, xe - res.alpha2 * std::pow(r, gamma2));
    }
  }
  res.beta = std::max(res.beta, raise_beta);
  res.beta2 = std::max(res.beta2, raise_beta2);

  res.verdict = (res.alpha > 0.0 && res.alpha2 > 0.0) ? Verdict::PASS : Verdict::FAIL;
  return res;
}

H2Result check_h2(const ForceField& E, const WeightContext& ctx, const SweepSpec& sweep) {
  const auto m = sweep_min([&](const Vec& x) { return h2_integrand(E, x, ctx); }, E.dim(),
                           sweep, 0.0, sweep.r_max);
  H2Result res;
  res.beta0 = m.value;
  res.argmin = m.arg;
  return res;
}

H3Result check_h3(const ForceField& E, const WeightContext& ctx, double R,
                  const SweepSpec& sweep) {
  if (!(R > 0.0 && R < sweep.r_max)) throw ConfigError("check_H3 needs 0 < R < r_max");
  // inf over the open set {|x| > R} equals the minimum over [R, r_max] by
  // continuity; the closed sweep makes boundary infima exact.
  const auto m = sweep_min([&](const Vec& x) { return h3_integrand(E, x, ctx); }, E.dim(),
                           sweep, R, sweep.r_max);
  H3Result res;
  res.omega_star = m.value;
  res.R = R;
  res.argmin = m.arg;
  res.verdict = m.value > 0.0 ? Verdict::PASS : Verdict::FAIL;
  return res;
}

LambdaZeroResult lambda0(double beta0, const WeightContext& ctx, double r_max) {
  require_finite(beta0, "beta0");
  const double k = ctx.k, d = ctx.d;
  SweepSpec radial;
  radial.r_max = r_max;
  const auto bracket_eq24 = [&](const Vec& x) {
    const double r2 = x.norm_sq(), one = 1.0 + r2;
    return k * d / one + k * (k - 2.0) * r2 / (one * one) - beta0;
  };
  const auto bracket_bound = [&](const Vec& x) {
    const double r2 = x.norm_sq(), one = 1.0 + r2;
    return (k * d + k * (k + d - 2.0) * r2) / (one * one) - beta0;
  };
  LambdaZeroResult res;
  res.variant_eq24 = sweep_max(bracket_eq24, 1, radial, 0.0, r_max).value;
  res.variant_bound = sweep_max(bracket_bound, 1, radial, 0.0, r_max).value;
  res.value = std::max(res.variant_eq24, res.variant_bound);
  res.variants_differ =
      std::abs(res.variant_eq24 - res.variant_bound) > 1e-12 * std::max(1.0, std::abs(res.value));
  return res;
}

SubeigenResult adjoint_subeigen(const ForceField& E, double alpha0, const SweepSpec& sweep) {
  if (!(alpha0 > 0.0)) throw ConfigError("adjoint_subeigen needs alpha0 > 0");
  SubeigenResult res;
  res.alpha0 = alpha0;
  const auto g = [&](const Vec& x) { return subeigen_integrand(E, x, alpha0); };
  const auto m = sweep_min(g, E.dim(), sweep, 0.0, sweep.r_max);
  res.b = m.value;
  res.argmin = m.arg;
  SweepSpec doubled = sweep;
  doubled.r_max = 2.0 * sweep.r_max;
  res.b_doubled_range = sweep_min(g, E.dim(), doubled, 0.0, doubled.r_max).value;
  const double drift = std::abs(res.b - res.b_doubled_range);
  res.verdict = drift <= std::max(1e-6, 1e-6 * std::abs(res.b)) ? Verdict::PASS : Verdict::FAIL;
  return res;
}

double h3_integrand_infimum(const ForceField& E, const WeightContext& ctx,
                            const SweepSpec& sweep) {
  return sweep_min([&](const Vec& x) { return h3_integrand(E, x, ctx); }, E.dim(), sweep, 0.0,
                   sweep.r_max)
      .value;
}

int auto_cutoff_scale(const ForceField& E, const WeightContext& ctx, const SweepSpec& sweep) {
  const auto dirs = sweep_directions(E.dim(), sweep);
  const int nr = std::max(2, sweep.radial_samples);
  double last_nonpositive = 0.0;
  bool positive_tail = false;
  for (int i = nr - 1; i >= 1; --i) {
    const double r = sweep.r_max * static_cast<double>(i) / (nr - 1);
    bool all_positive = true;
    for (const Vec& dir : dirs) {
      if (h3_integrand(E, r * dir, ctx) <= 0.0) {
        all_positive = false;
        break;
      }
    }
    if (!all_positive) {
      last_nonpositive = r;
      break;
    }
    positive_tail = true;
  }
  if (!positive_tail) return 0;
  return std::max(1, static_cast<int>(std::floor(last_nonpositive)) + 1);
}

HypothesisReport verify_hypotheses(const ForceField& E, const WeightContext& ctx,
                                   const HypothesisParams& params) {
  HypothesisReport rep;
  rep.d = E.dim();
  rep.sweep = params.sweep;
  rep.h1 = check_h1(E, params.gamma, params.gamma2, params.sweep);
  rep.h2 = check_h2(E, ctx, params.sweep);
  rep.h3 = check_h3(E, ctx, params.R, params.sweep);
  rep.lam0 = lambda0(rep.h2.beta0, ctx, params.sweep.r_max);
  const double alpha0 = params.alpha0 > 0.0 ? params.alpha0 : E.dim() + 2.0;
  rep.subeigen = adjoint_subeigen(E, alpha0, params.sweep);
  return rep;
}

}  // namespace fpk
