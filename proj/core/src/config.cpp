#include "fpk/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "fpk/io.hpp"

namespace fpk {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(d);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "' expects a boolean, got '" + v + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects an unsigned integer, got '" + v + "'");
  }
}

/// Monomial list "c,px[,py] ; c,px[,py] ; ..."
std::vector<Monomial> parse_poly(const std::string& key, const std::string& text, int d) {
  std::vector<Monomial> terms;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    std::istringstream ps(part);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ps, tok, ',')) cols.push_back(trim(tok));
    if (cols.size() != static_cast<std::size_t>(1 + d))
      throw ConfigError("key '" + key + "': monomial '" + part + "' needs coeff plus " +
                        std::to_string(d) + " exponent(s)");
    Monomial m;
    m.coeff = to_double(key, cols[0]);
    m.powers[0] = to_int(key, cols[1]);
    if (d == 2) m.powers[1] = to_int(key, cols[2]);
    terms.push_back(m);
  }
  if (terms.empty()) throw ConfigError("key '" + key + "' has no monomials");
  return terms;
}

}  // namespace

RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, std::string> kv;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    kv[key] = val;
  }

  for (const auto& [key, val] : kv) {
    if (key == "field.kind") cfg.field_kind = val;
    else if (key == "field.gamma") cfg.field_gamma = to_double(key, val);
    else if (key == "field.theta") cfg.field_theta = to_double(key, val);
    else if (key == "field.coeff") cfg.field_coeff = to_double(key, val);
    else if (key == "field.poly_x") cfg.field_poly_x = val;
    else if (key == "field.poly_y") cfg.field_poly_y = val;
    else if (key == "grid.d") cfg.d = to_int(key, val);
    else if (key == "grid.r_dom") cfg.r_dom = to_double(key, val);
    else if (key == "grid.n") cfg.n = to_int(key, val);
    else if (key == "weight.k") cfg.k = to_double(key, val);
    else if (key == "weight.p") cfg.p = to_double(key, val);
    else if (key == "evolve.dt") cfg.dt = to_double(key, val);
    else if (key == "evolve.t_final") cfg.t_final = to_double(key, val);
    else if (key == "evolve.stride") cfg.stride = to_int(key, val);
    else if (key == "evolve.window_fraction") cfg.window_fraction = to_double(key, val);
    else if (key == "evolve.crank_nicolson") cfg.crank_nicolson = to_bool(key, val);
    else if (key == "evolve.initial") cfg.initial = val;
    else if (key == "evolve.initial_shift") cfg.initial_shift = to_double(key, val);
    else if (key == "split.m_amp") cfg.M = to_double(key, val);
    else if (key == "split.n_cutoff") cfg.n_cutoff = to_int(key, val);
    else if (key == "split.trials") cfg.split_trials = to_int(key, val);
    else if (key == "hypo.r_max") cfg.hypo_r_max = to_double(key, val);
    else if (key == "hypo.radial_samples") cfg.hypo_radial = to_int(key, val);
    else if (key == "hypo.angular_samples") cfg.hypo_angular = to_int(key, val);
    else if (key == "hypo.r_h3") cfg.hypo_R = to_double(key, val);
    else if (key == "hypo.gamma") cfg.hypo_gamma = to_double(key, val);
    else if (key == "hypo.gamma2") cfg.hypo_gamma2 = to_double(key, val);
    else if (key == "hypo.alpha0") cfg.hypo_alpha0 = to_double(key, val);
    else if (key == "tol.stationary") cfg.tol_stationary = to_double(key, val);
    else if (key == "tol.max_iter") cfg.max_iter = to_int(key, val);
    else if (key == "nash.family") cfg.nash_family = to_int(key, val);
    else if (key == "out.dir") cfg.out_dir = val;
    else if (key == "out.export_operator") cfg.export_operator = to_bool(key, val);
    else if (key == "seed") cfg.seed = to_u64(key, val);
    else throw ConfigError("unknown key '" + key + "'");
  }
  if (cfg.r_dom == 0.0) cfg.r_dom = cfg.d == 2 ? 6.0 : 8.0;
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  try {
    return parse_text(read_text_file(path));
  } catch (const MissingInputError&) {
    throw ConfigError("cannot open configuration file '" + path + "'");
  }
}

std::vector<std::string> RunConfig::validate() const {
  if (d != 1 && d != 2) throw ConfigError("grid.d must be 1 or 2");
  if (n < 3 || n % 2 == 0) throw ConfigError("grid.n must be odd and >= 3");
  if (!(r_dom > 0.0)) throw ConfigError("grid.r_dom must be positive");
  if (k < 0.0) throw ConfigError("weight.k must be >= 0");
  if (p < 2.0) throw ConfigError("weight.p must be >= 2");
  if (!(dt > 0.0) || !(t_final > 0.0)) throw ConfigError("evolve.dt and evolve.t_final must be positive");
  if (M < 0.0) throw ConfigError("split.m_amp must be >= 0");
  if (n_cutoff < 0) throw ConfigError("split.n_cutoff must be >= 0 (0 = auto)");
  if (hypo_radial < 2 || hypo_angular < 4) throw ConfigError("hypo sampling too coarse");
  if (!(hypo_R > 0.0 && hypo_R < hypo_r_max)) throw ConfigError("hypo.r_h3 must lie in (0, hypo.r_max)");

  std::vector<std::string> warnings;
  if (n_cutoff > 0 && 2.0 * n_cutoff >= r_dom)
    warnings.push_back("cutoff support [n, 2n] reaches the domain boundary (2n >= r_dom)");
  WeightContext ctx(k, d, p);
  if (!ctx.nash_admissible())
    warnings.push_back("weight context violates the Nash precondition (k/d rule); nash will be rejected");
  return warnings;
}

ForceField RunConfig::make_field() const {
  const FieldKind kind = field_kind_from_string(field_kind);
  switch (kind) {
    case FieldKind::gradient_power: return ForceField::gradient_power(d, field_gamma);
    case FieldKind::linear: return ForceField::linear(d, field_coeff);
    case FieldKind::gradient_power_plus_rotation:
      if (d != 2) throw ConfigError("gradient_power_plus_rotation needs grid.d = 2");
      return ForceField::gradient_power_plus_rotation(field_gamma, field_theta);
    case FieldKind::custom_polynomial: {
      std::vector<Monomial> ex = parse_poly("field.poly_x", field_poly_x, d);
      std::vector<Monomial> ey;
      if (d == 2) ey = parse_poly("field.poly_y", field_poly_y, d);
      return ForceField::polynomial(d, std::move(ex), std::move(ey));
    }
  }
  throw ConfigError("unreachable field kind");
}

WeightContext RunConfig::make_weight_context() const { return WeightContext(k, d, p); }

HypothesisParams RunConfig::make_hypothesis_params() const {
  HypothesisParams hp;
  const FieldKind kind = field_kind_from_string(field_kind);
  double g = hypo_gamma;
  if (g == 0.0)
    g = (kind == FieldKind::gradient_power || kind == FieldKind::gradient_power_plus_rotation)
            ? field_gamma
            : 2.0;
  hp.gamma = g;
  hp.gamma2 = hypo_gamma2 == 0.0 ? g : hypo_gamma2;
  hp.R = hypo_R;
  hp.alpha0 = hypo_alpha0;
  hp.sweep.r_max = hypo_r_max;
  hp.sweep.radial_samples = hypo_radial;
  hp.sweep.angular_samples = hypo_angular;
  return hp;
}

}  // namespace fpk
