// fpk: numerical laboratory for the Fokker-Planck generator
//   L u = div(grad u + E u)
// on a truncated box, with hypothesis checkers, stationary states, spectra,
// time evolution, semigroup splitting, and functional-inequality probes.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>

#include "fpk/config.hpp"
#include "fpk/evolution.hpp"
#include "fpk/fields.hpp"
#include "fpk/grid.hpp"
#include "fpk/inequalities.hpp"
#include "fpk/io.hpp"
#include "fpk/operator.hpp"
#include "fpk/spectral.hpp"
#include "fpk/splitting.hpp"

namespace fs = std::filesystem;
using namespace fpk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdictFail = 2;
constexpr int kExitError = 3;
constexpr int kExitMissingInput = 4;

struct CommandContext {
  RunConfig cfg;
  fs::path out;
  std::vector<std::string> warnings;
  std::chrono::steady_clock::time_point started;
};

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

Json config_echo(const RunConfig& c) {
  Json j;
  j["field.kind"] = c.field_kind;
  j["field.gamma"] = c.field_gamma;
  j["field.theta"] = c.field_theta;
  j["field.coeff"] = c.field_coeff;
  if (!c.field_poly_x.empty()) j["field.poly_x"] = c.field_poly_x;
  if (!c.field_poly_y.empty()) j["field.poly_y"] = c.field_poly_y;
  j["grid.d"] = c.d;
  j["grid.r_dom"] = c.r_dom;
  j["grid.n"] = c.n;
  j["weight.k"] = c.k;
  j["weight.p"] = c.p;
  j["evolve.dt"] = c.dt;
  j["evolve.t_final"] = c.t_final;
  j["evolve.stride"] = c.stride;
  j["evolve.window_fraction"] = c.window_fraction;
  j["evolve.crank_nicolson"] = c.crank_nicolson;
  j["evolve.initial"] = c.initial;
  j["evolve.initial_shift"] = c.initial_shift;
  j["split.m_amp"] = c.M;
  j["split.n_cutoff"] = c.n_cutoff;
  j["split.trials"] = c.split_trials;
  j["hypo.r_max"] = c.hypo_r_max;
  j["hypo.radial_samples"] = c.hypo_radial;
  j["hypo.angular_samples"] = c.hypo_angular;
  j["hypo.r_h3"] = c.hypo_R;
  j["hypo.gamma"] = c.hypo_gamma;
  j["hypo.gamma2"] = c.hypo_gamma2;
  j["hypo.alpha0"] = c.hypo_alpha0;
  j["tol.stationary"] = c.tol_stationary;
  j["tol.max_iter"] = c.max_iter;
  j["nash.family"] = c.nash_family;
  j["out.dir"] = c.out_dir;
  j["out.export_operator"] = c.export_operator;
  j["seed"] = static_cast<std::int64_t>(c.seed);
  return j;
}

void write_manifest(const CommandContext& ctx, const std::string& command) {
  Json j;
  j["command"] = command;
  j["version"] = FPK_VERSION;
  j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
               "." + std::to_string(EIGEN_MINOR_VERSION);
  j["timestamp"] = iso_timestamp();
  j["elapsed_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.started).count();
  j["threads"] = worker_count();
  Json warn = Json::Array{};
  for (const auto& w : ctx.warnings) warn.push_back(w);
  j["warnings"] = std::move(warn);
  j["config"] = config_echo(ctx.cfg);
  std::string name = command;
  for (char& c : name)
    if (c == '-') c = '_';
  write_text_file((ctx.out / (name + "_manifest.json")).string(), j.dump());
}

CommandContext make_context(const std::string& config_path, const std::string& out_override,
                            std::optional<std::uint64_t> seed_override) {
  CommandContext ctx;
  ctx.started = std::chrono::steady_clock::now();
  ctx.cfg = RunConfig::parse_file(config_path);
  if (!out_override.empty()) ctx.cfg.out_dir = out_override;
  if (seed_override) ctx.cfg.seed = *seed_override;
  ctx.warnings = ctx.cfg.validate();
  for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << "\n";
  ctx.out = fs::path(ctx.cfg.out_dir);
  fs::create_directories(ctx.out);
  return ctx;
}

GridFunction make_initial(const RunConfig& cfg, GridPtr grid) {
  const double s = cfg.initial_shift;
  if (cfg.initial == "gaussian" || cfg.initial == "shifted_gaussian") {
    const double shift = cfg.initial == "gaussian" ? 0.0 : s;
    const double norm = std::pow(2.0 * M_PI, 0.5 * grid->dim());
    return sample_on_grid(grid, [&](const Vec& x) {
      const double dx0 = x[0] - shift;
      const double dx1 = grid->dim() == 2 ? x[1] : 0.0;
      return std::exp(-0.5 * (dx0 * dx0 + dx1 * dx1)) / norm;
    });
  }
  if (cfg.initial == "uniform") {
    const double vol = std::pow(2.0 * cfg.r_dom, grid->dim());
    return GridFunction(grid, 1.0 / vol);
  }
  if (cfg.initial == "cell") {
    GridFunction f(grid, 0.0);
    f[grid->cell_count() / 2] = 1.0 / grid->cell_volume();
    return f;
  }
  throw ConfigError("unknown evolve.initial '" + cfg.initial + "'");
}

Json hypothesis_json(const HypothesisReport& rep) {
  Json j;
  j["alpha"] = rep.h1.alpha;
  j["beta"] = rep.h1.beta;
  j["alpha2"] = rep.h1.alpha2;
  j["beta2"] = rep.h1.beta2;
  j["beta0"] = rep.h2.beta0;
  j["omega_star"] = rep.h3.omega_star;
  j["R"] = rep.h3.R;
  j["lambda0"] = rep.lam0.value;
  j["b"] = rep.subeigen.b;
  Json v;
  v["h1"] = to_string(rep.h1.verdict);
  v["h2"] = "PASS";  // H2 yields a finite beta0 or raises NUMERIC
  v["h3"] = to_string(rep.h3.verdict);
  v["b"] = to_string(rep.subeigen.verdict);
  v["lambda0_variants_differ"] = rep.lam0.variants_differ;
  v["overall"] = to_string(rep.overall());
  j["verdicts"] = std::move(v);
  return j;
}

// --- commands -------------------------------------------------------------

int cmd_check_hypotheses(CommandContext& ctx) {
  const ForceField E = ctx.cfg.make_field();
  const WeightContext wctx = ctx.cfg.make_weight_context();
  const HypothesisReport rep = verify_hypotheses(E, wctx, ctx.cfg.make_hypothesis_params());
  write_text_file((ctx.out / "hypotheses.json").string(), hypothesis_json(rep).dump());
  write_manifest(ctx, "check-hypotheses");
  return rep.overall() == Verdict::PASS ? kExitOk : kExitVerdictFail;
}

int cmd_stationary(CommandContext& ctx) {
  const ForceField E = ctx.cfg.make_field();
  auto grid = build_grid(ctx.cfg.d, ctx.cfg.r_dom, ctx.cfg.n);
  const OperatorMatrix op = assemble_operator(grid, E);
  if (ctx.cfg.export_operator) write_matrix_market((ctx.out / "operator.mtx").string(), op);
  const StationaryResult st = stationary(op, ctx.cfg.tol_stationary, ctx.cfg.max_iter);
  const PositivityReport pos = strict_positivity_check(st.G);

  write_gridfunction_csv((ctx.out / "stationary_G.csv").string(), st.G);
  Json j;
  j["residual"] = st.residual;
  j["min_value"] = st.min_value;
  j["mass"] = st.mass;
  j["iterations"] = st.iterations;
  j["positivity"] = pos.pass ? "PASS" : "FAIL";
  write_text_file((ctx.out / "stationary.json").string(), j.dump());
  write_manifest(ctx, "stationary");
  return pos.pass ? kExitOk : kExitVerdictFail;
}

int cmd_evolve(CommandContext& ctx) {
  const ForceField E = ctx.cfg.make_field();
  auto grid = build_grid(ctx.cfg.d, ctx.cfg.r_dom, ctx.cfg.n);
  const OperatorMatrix op = assemble_operator(grid, E);

  // Distance observable needs the stationary state: reuse a prior result
  // from the run directory when present, otherwise solve inline.
  GridFunction G;
  const fs::path gpath = ctx.out / "stationary_G.csv";
  if (fs::exists(gpath)) {
    G = read_gridfunction_csv(gpath.string(), grid);
  } else {
    G = stationary(op, ctx.cfg.tol_stationary, ctx.cfg.max_iter).G;
  }

  const GridFunction f0 = make_initial(ctx.cfg, grid);
  ObserverSpec obs;
  obs.G = &G;
  obs.k = ctx.cfg.k;
  obs.p = ctx.cfg.p;
  obs.stride = ctx.cfg.stride;
  const Trajectory traj =
      evolve(op, f0, ctx.cfg.t_final, ctx.cfg.dt, obs, ctx.cfg.crank_nicolson);
  write_trajectory_csv((ctx.out / "trajectory.csv").string(), traj);

  const DecayFit fit = decay_fit(traj, ctx.cfg.window_fraction);
  Json j;
  j["omega"] = fit.omega;
  j["C"] = fit.C;
  j["t0"] = fit.t0;
  j["T"] = fit.t_end;
  j["residual"] = fit.residual;
  write_text_file((ctx.out / "decay.json").string(), j.dump());
  if (fit.window_shrunk)
    ctx.warnings.push_back("decay fit window shrank at the 1e-14 distance floor");

  // L^p_k growth monitor against the p-adjusted lambda0.
  const WeightContext pctx(ctx.cfg.k, ctx.cfg.d, ctx.cfg.p);
  HypothesisParams hp = ctx.cfg.make_hypothesis_params();
  const double beta0p = check_h2(E, pctx, hp.sweep).beta0;
  const double lam0p = lambda0(beta0p, pctx, hp.sweep.r_max).value;
  const LpReport lp = lp_monitor(traj, ctx.cfg.p, ctx.cfg.k, lam0p);
  Json lj;
  lj["p"] = lp.p;
  lj["k"] = lp.k;
  lj["lambda0p"] = lp.lambda0p;
  lj["max_violation"] = lp.max_violation;
  lj["pass"] = lp.pass;
  write_text_file((ctx.out / "lp.json").string(), lj.dump());

  write_manifest(ctx, "evolve");
  return (fit.omega > 0.0 && lp.pass) ? kExitOk : kExitVerdictFail;
}

int cmd_spectrum(CommandContext& ctx) {
  const ForceField E = ctx.cfg.make_field();
  auto grid = build_grid(ctx.cfg.d, ctx.cfg.r_dom, ctx.cfg.n);
  const OperatorMatrix op = assemble_operator(grid, E);
  const SpectrumResult spec = spectral_gap(op);
  write_spectrum_csv((ctx.out / "spectrum_eigs.csv").string(), spec);
  Json j;
  j["a_star"] = spec.gap;
  j["principal_re"] = spec.principal.real();
  j["principal_im"] = spec.principal.imag();
  j["principal_positive"] = spec.principal_positive;
  j["count"] = static_cast<std::int64_t>(spec.eigenvalues.size());
  write_text_file((ctx.out / "spectrum.json").string(), j.dump());
  write_manifest(ctx, "spectrum");
  return (spec.gap > 0.0 && spec.principal_positive) ? kExitOk : kExitVerdictFail;
}

int cmd_splitting(CommandContext& ctx) {
  const ForceField E = ctx.cfg.make_field();
  const WeightContext wctx = ctx.cfg.make_weight_context();
  auto grid = build_grid(ctx.cfg.d, ctx.cfg.r_dom, ctx.cfg.n);
  const OperatorMatrix op = assemble_operator(grid, E);
  const HypothesisParams hp = ctx.cfg.make_hypothesis_params();

  const H3Result h3 = check_h3(E, wctx, hp.R, hp.sweep);
  int nc = ctx.cfg.n_cutoff;
  if (nc == 0) {
    nc = auto_cutoff_scale(E, wctx, hp.sweep);
    if (nc == 0) nc = static_cast<int>(std::ceil(hp.R));
  }
  const CutoffSpec cutoff = build_cutoff(grid, nc, ctx.cfg.M);
  if (cutoff.support_truncated)
    ctx.warnings.push_back("cutoff support [n, 2n] reaches the domain boundary (2n >= r_dom)");
  const SplitOperator sp = split(op, cutoff);

  const DissipativityResult dis = dissipativity_fit(sp, wctx, ctx.cfg.split_trials,
                                                    ctx.cfg.t_final, ctx.cfg.dt, ctx.cfg.seed);

  const GridFunction f0 = make_initial(ctx.cfg, grid);
  const double r1 = duhamel_residual(op, sp, f0, ctx.cfg.t_final, ctx.cfg.dt, ctx.cfg.k);
  const double r2 = duhamel_residual(op, sp, f0, ctx.cfg.t_final, 0.5 * ctx.cfg.dt, ctx.cfg.k);

  int violations = 0;
  double calibration = 0.0;
  if (dis.omega0 > 0.0) {
    Rng rng(ctx.cfg.seed + 1);
    for (int s = 0; s < 20; ++s) {
      Vec c;
      c.d = grid->dim();
      for (int a = 0; a < grid->dim(); ++a)
        c[a] = rng.uniform(-0.5 * grid->half_width(), 0.5 * grid->half_width());
      const double w = rng.uniform(0.5, 2.0);
      GridFunction g = sample_on_grid(grid, [&](const Vec& x) {
        const double dx0 = x[0] - c[0];
        const double dx1 = grid->dim() == 2 ? x[1] - c[1] : 0.0;
        return std::exp(-(dx0 * dx0 + dx1 * dx1) / (2.0 * w * w));
      });
      const auto conv =
          convolution_bound_check(sp, wctx, dis.omega0, g, ctx.cfg.t_final, ctx.cfg.dt);
      violations += conv.violations;
      calibration = std::max(calibration, conv.calibration_C);
    }
  }

  Json j;
  j["M"] = ctx.cfg.M;
  j["n"] = nc;
  j["omega0"] = dis.omega0;
  j["omega_star"] = h3.omega_star;
  Json dr = Json::Array{};
  {
    Json pair1 = Json::Array{};
    pair1.push_back(ctx.cfg.dt);
    pair1.push_back(r1);
    Json pair2 = Json::Array{};
    pair2.push_back(0.5 * ctx.cfg.dt);
    pair2.push_back(r2);
    dr.push_back(std::move(pair1));
    dr.push_back(std::move(pair2));
  }
  j["duhamel_residuals"] = std::move(dr);
  j["bound_violations"] = violations;
  j["calibration_C"] = calibration;
  j["dissipativity"] = to_string(dis.verdict);
  j["h3"] = to_string(h3.verdict);
  write_text_file((ctx.out / "splitting.json").string(), j.dump());
  write_manifest(ctx, "splitting");

  const bool ok = h3.verdict == Verdict::PASS && dis.verdict == Verdict::PASS &&
                  violations == 0;
  return ok ? kExitOk : kExitVerdictFail;
}

int cmd_nash(CommandContext& ctx) {
  const WeightContext wctx = ctx.cfg.make_weight_context();
  auto grid = build_grid(ctx.cfg.d, ctx.cfg.r_dom, ctx.cfg.n);
  const NashReport rep = nash_check(grid, wctx, ctx.cfg.nash_family, ctx.cfg.seed);
  write_nash_csv((ctx.out / "nash.csv").string(), rep);
  Json j;
  j["sup_ratio"] = rep.sup_ratio;
  j["family_size"] = static_cast<std::int64_t>(rep.entries.size());
  j["k"] = rep.k;
  j["d"] = rep.d;
  j["family"] = rep.family;
  j["tight_regime"] = rep.tight_regime;
  j["caveat"] = "sampled family; sup ratio is a lower bound for the Nash constant";
  write_text_file((ctx.out / "nash.json").string(), j.dump());
  write_manifest(ctx, "nash");
  return kExitOk;
}

int cmd_report(CommandContext& ctx) {
  using nlohmann::json;
  const auto load = [&](const char* name) -> std::optional<json> {
    const fs::path p = ctx.out / name;
    if (!fs::exists(p)) return std::nullopt;
    return json::parse(read_text_file(p.string()));
  };

  const auto hyp = load("hypotheses.json");
  const auto sta = load("stationary.json");
  const auto dec = load("decay.json");
  const auto spe = load("spectrum.json");
  const auto spl = load("splitting.json");
  const auto nas = load("nash.json");
  if (!hyp && !sta && !dec && !spe && !spl && !nas)
    throw MissingInputError("run directory contains no known artifacts");

  Json j;
  std::string text = "fpk consolidated report\n=======================\n";
  const auto put = [&](const char* key, const std::optional<json>& src, const char* field) {
    if (src && src->contains(field)) {
      const double v = (*src)[field].get<double>();
      j[key] = v;
      text += std::string(key) + " = " + fmt17(v) + "\n";
    } else {
      j[key] = "MISSING";
      text += std::string(key) + " = MISSING\n";
    }
  };
  put("beta0", hyp, "beta0");
  put("lambda0", hyp, "lambda0");
  put("omega_star", hyp, "omega_star");
  put("b", hyp, "b");
  put("a_star", spe, "a_star");
  put("omega", dec, "omega");
  put("omega0", spl, "omega0");

  Json verdicts;
  if (hyp && hyp->contains("verdicts"))
    verdicts["hypotheses"] = (*hyp)["verdicts"]["overall"].get<std::string>();
  else
    verdicts["hypotheses"] = "MISSING";
  verdicts["stationary_positivity"] =
      sta ? (*sta)["positivity"].get<std::string>() : std::string("MISSING");
  verdicts["dissipativity"] =
      spl ? (*spl)["dissipativity"].get<std::string>() : std::string("MISSING");
  j["verdicts"] = std::move(verdicts);

  if (dec && spe) {
    const double omega = (*dec)["omega"].get<double>();
    const double astar = (*spe)["a_star"].get<double>();
    const bool ok = omega <= 1.05 * astar;
    j["omega_le_astar_5pct"] = ok;
    text += std::string("omega <= a* + 5%: ") + (ok ? "OK" : "VIOLATED") + "\n";
  }
  if (nas) {
    j["nash_sup_ratio"] = (*nas)["sup_ratio"].get<double>();
    text += "nash_sup_ratio = " + fmt17((*nas)["sup_ratio"].get<double>()) + "\n";
  }

  write_text_file((ctx.out / "summary.json").string(), j.dump());
  write_text_file((ctx.out / "summary.txt").string(), text);
  write_manifest(ctx, "report");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fokker-Planck generator laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::optional<std::uint64_t> seed_override;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_override, "output directory (overrides out.dir)");
    sub->add_option("--seed", seed_override, "RNG seed (overrides seed)");
  };

  CLI::App* c_hyp = app.add_subcommand("check-hypotheses", "verify (H1)-(H3) and constants");
  CLI::App* c_sta = app.add_subcommand("stationary", "compute the stationary state G");
  CLI::App* c_evo = app.add_subcommand("evolve", "integrate the flow and fit the decay rate");
  CLI::App* c_spe = app.add_subcommand("spectrum", "dense spectrum and spectral gap");
  CLI::App* c_spl = app.add_subcommand("splitting", "L = A + B splitting diagnostics");
  CLI::App* c_nas = app.add_subcommand("nash", "Nash-inequality ratio sweep");
  CLI::App* c_rep = app.add_subcommand("report", "consolidated summary of a run directory");
  for (CLI::App* sub : {c_hyp, c_sta, c_evo, c_spe, c_spl, c_nas, c_rep}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    CommandContext ctx = make_context(config_path, out_override, seed_override);
    if (c_hyp->parsed()) return cmd_check_hypotheses(ctx);
    if (c_sta->parsed()) return cmd_stationary(ctx);
    if (c_evo->parsed()) return cmd_evolve(ctx);
    if (c_spe->parsed()) return cmd_spectrum(ctx);
    if (c_spl->parsed()) return cmd_splitting(ctx);
    if (c_nas->parsed()) return cmd_nash(ctx);
    if (c_rep->parsed()) return cmd_report(ctx);
    return kExitError;
  } catch (const MissingInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
