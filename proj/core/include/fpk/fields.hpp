#ifndef FPK_FIELDS_HPP
#define FPK_FIELDS_HPP

#include <array>
#include <string>
#include <vector>

#include "fpk/errors.hpp"
#include "fpk/util.hpp"

namespace fpk {

/// Built-in force-field families. The drift enters the generator as
/// L u = div(grad u + E u); "gradient_power" is E0 = grad<x>^gamma / gamma,
/// i.e. E0(x) = x <x>^{gamma-2}, and the rotation perturbation
/// E1(x) = theta (-x2, x1) / (1+|x|^2) satisfies x.E1 = 0 and div E1 = 0.
enum class FieldKind {
  gradient_power,
  linear,
  gradient_power_plus_rotation,
  custom_polynomial,
};

const char* to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

/// One term c * x1^p1 * x2^p2 of a polynomial field component.
struct Monomial {
  double coeff{0.0};
  std::array<int, 2> powers{0, 0};
};

class ForceField {
public:
  static ForceField gradient_power(int d, double gamma);
  static ForceField linear(int d, double coeff = 1.0);
  static ForceField gradient_power_plus_rotation(double gamma, double theta);
  static ForceField polynomial(int d, std::vector<Monomial> ex, std::vector<Monomial> ey = {});

  Vec eval(const Vec& x) const;
  double divergence(const Vec& x) const;

  int dim() const { return d_; }
  FieldKind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double theta() const { return theta_; }
  std::string describe() const;

private:
  ForceField(FieldKind kind, int d) : kind_(kind), d_(d) {}

  FieldKind kind_;
  int d_;
  double gamma_{2.0};
  double theta_{0.0};
  double coeff_{1.0};
  std::array<std::vector<Monomial>, 2> poly_{};
};

/// Lebesgue-weight context: weight <x>^k, exponent p (with conjugate p').
struct WeightContext {
  double k{2.0};
  int d{1};
  double p{2.0};

  WeightContext(double k_, int d_, double p_ = 2.0);
  double p_conj() const { return p / (p - 1.0); }
  /// Nash precondition: k > 0 when d >= 2, k >= 2 when d = 1.
  bool nash_admissible() const { return d >= 2 ? k > 0.0 : k >= 2.0; }
};

// --- weight-function identities ---
double weight(const Vec& x, double k);            // <x>^k
Vec grad_weight(const Vec& x, double k);          // k x/(1+|x|^2) <x>^k
double laplace_weight(const Vec& x, double k);    // (kd + k(k+d-2)|x|^2)/(1+|x|^2)^2 <x>^k

/// Psi_k(x)/<x>^k for p = 2:
///   -(kd + k(k+d-2)|x|^2)/(1+|x|^2)^2 - div E + k x.E/(1+|x|^2).
double psi_k_over_weight(const ForceField& E, const Vec& x, const WeightContext& ctx);

/// Left-hand side of (H2): -(p/p') div E + k x.E/(1+|x|^2).
double h2_integrand(const ForceField& E, const Vec& x, const WeightContext& ctx);

/// Left-hand side of (H3): weight term + H2 integrand.
double h3_integrand(const ForceField& E, const Vec& x, const WeightContext& ctx);

/// L*psi/psi for psi = <x>^{-alpha0}.
double subeigen_integrand(const ForceField& E, const Vec& x, double alpha0);

// --- sampling-based hypothesis verification ---
// All checks sweep |x| in [0, r_max] (radial grid, plus angular directions in
// d = 2) and certify inequalities at the sampled points only; they are
// evidence, not proofs.
struct SweepSpec {
  double r_max{50.0};
  int radial_samples{10001};
  int angular_samples{64};
};

struct H1Result {
  double alpha{0.0}, beta{0.0}, alpha2{0.0}, beta2{0.0};
  double gamma{2.0}, gamma2{2.0};
  Verdict verdict{Verdict::FAIL};
};

struct H2Result {
  double beta0{0.0};
  Vec argmin;
};

struct H3Result {
  double omega_star{0.0};
  double R{0.0};
  Vec argmin;
  Verdict verdict{Verdict::FAIL};
};

struct LambdaZeroResult {
  double value{0.0};           // max of the two bracket variants
  double variant_eq24{0.0};    // k(k-2)|x|^2 bracket
  double variant_bound{0.0};   // k(k+d-2)|x|^2 bracket
  bool variants_differ{false};
};

struct SubeigenResult {
  double b{0.0};
  double b_doubled_range{0.0};  // same infimum swept to 2 r_max
  double alpha0{0.0};
  Vec argmin;
  Verdict verdict{Verdict::FAIL};
};

H1Result check_h1(const ForceField& E, double gamma, double gamma2, const SweepSpec& sweep);
H2Result check_h2(const ForceField& E, const WeightContext& ctx, const SweepSpec& sweep);
H3Result check_h3(const ForceField& E, const WeightContext& ctx, double R, const SweepSpec& sweep);
LambdaZeroResult lambda0(double beta0, const WeightContext& ctx, double r_max = 50.0);
SubeigenResult adjoint_subeigen(const ForceField& E, double alpha0, const SweepSpec& sweep);

/// Infimum of the H3 integrand over the whole sweep (R = 0). Used by the
/// negative-part coercivity check, where the restricted omega* is not a
/// valid global bound.
double h3_integrand_infimum(const ForceField& E, const WeightContext& ctx, const SweepSpec& sweep);

/// Smallest integer n >= 1 such that the H3 integrand is positive at every
/// sampled radius > n; returns 0 if none exists within the sweep.
int auto_cutoff_scale(const ForceField& E, const WeightContext& ctx, const SweepSpec& sweep);

struct HypothesisReport {
  H1Result h1;
  H2Result h2;
  H3Result h3;
  LambdaZeroResult lam0;
  SubeigenResult subeigen;
  SweepSpec sweep;
  int d{1};
  Verdict overall() const {
    if (h1.verdict == Verdict::FAIL || h3.verdict == Verdict::FAIL ||
        subeigen.verdict == Verdict::FAIL)
      return Verdict::FAIL;
    return Verdict::PASS;
  }
};

struct HypothesisParams {
  double gamma{2.0};
  double gamma2{2.0};
  double R{3.0};
  double alpha0{0.0};  // 0 -> default d + 2
  SweepSpec sweep;
};

HypothesisReport verify_hypotheses(const ForceField& E, const WeightContext& ctx,
                                   const HypothesisParams& params);

}  // namespace fpk

#endif
