#ifndef FPK_CONFIG_HPP
#define FPK_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fpk/fields.hpp"

namespace fpk {

/// Run configuration parsed from a flat key = value text file with dotted
/// sections (field.kind, grid.n, ...). Unknown keys are rejected.
struct RunConfig {
  // field.*
  std::string field_kind{"linear"};
  double field_gamma{2.0};
  double field_theta{1.0};
  double field_coeff{1.0};
  std::string field_poly_x;
  std::string field_poly_y;

  // grid.*
  int d{1};
  double r_dom{0.0};  // 0 -> 8 for d = 1, 6 for d = 2
  int n{401};

  // weight.*
  double k{2.0};
  double p{2.0};

  // evolve.*
  double dt{0.01};
  double t_final{10.0};
  int stride{1};
  double window_fraction{0.1};
  bool crank_nicolson{false};
  std::string initial{"shifted_gaussian"};  // shifted_gaussian | gaussian | uniform | cell
  double initial_shift{2.0};

  // split.*
  double M{10.0};
  int n_cutoff{0};  // 0 -> auto from the H3 sweep
  int split_trials{50};

  // hypo.*
  double hypo_r_max{50.0};
  int hypo_radial{10001};
  int hypo_angular{64};
  double hypo_R{3.0};
  double hypo_gamma{0.0};   // 0 -> field gamma (or 2 for linear)
  double hypo_gamma2{0.0};  // 0 -> hypo_gamma
  double hypo_alpha0{0.0};  // 0 -> d + 2

  // tol.*
  double tol_stationary{1e-10};
  int max_iter{50};

  // nash.*
  int nash_family{64};

  // out.* and seed
  std::string out_dir{"."};
  std::uint64_t seed{1};
  bool export_operator{false};

  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_text(const std::string& text);

  /// Validates cross-field preconditions (odd n, dimensions, positive spans).
  /// Returns human-readable warnings (non-fatal).
  std::vector<std::string> validate() const;

  ForceField make_field() const;
  WeightContext make_weight_context() const;
  HypothesisParams make_hypothesis_params() const;
};

}  // namespace fpk

#endif
