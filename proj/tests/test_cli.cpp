#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "fpk/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "fpk_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(FPK_BIN) + " " + args + " > " + (kRoot / "stdout.txt").string() +
                          " 2> " + (kRoot / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string write_config(const std::string& name, const std::string& body) {
  fs::create_directories(kRoot);
  const fs::path p = kRoot / name;
  std::ofstream os(p);
  os << body;
  return p.string();
}

std::string slurp(const fs::path& p) { return fpk::read_text_file(p.string()); }

const char* kOuBody =
    "field.kind = linear\n"
    "grid.d = 1\n"
    "grid.r_dom = 8\n"
    "grid.n = 101\n"
    "weight.k = 2\n"
    "evolve.dt = 0.02\n"
    "evolve.t_final = 6\n"
    "split.m_amp = 10\n"
    "split.trials = 5\n"
    "hypo.r_h3 = 3\n";

}  // namespace

TEST_CASE("check-hypotheses on the OU config: exit 0 and pinned constants") {
  fs::create_directories(kRoot);
  const auto out = (kRoot / "out_hyp").string();
  fs::remove_all(out);
  const auto cfg = write_config("ou.cfg", std::string(kOuBody) + "out.dir = " + out + "\n");
  CHECK(run("check-hypotheses --config " + cfg) == 0);

  const auto j = json::parse(slurp(fs::path(out) / "hypotheses.json"));
  CHECK(j["beta0"].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(j["lambda0"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(j["omega_star"].get<double>() == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(j["alpha"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["verdicts"]["overall"] == "PASS");
  // manifest written alongside
  CHECK(fs::exists(fs::path(out) / "check_hypotheses_manifest.json"));
}

TEST_CASE("check-hypotheses with zero drift: H3 fails, exit 2") {
  const auto out = (kRoot / "out_zero").string();
  fs::remove_all(out);
  const auto cfg = write_config("zero.cfg",
                                "field.kind = linear\nfield.coeff = 0\ngrid.n = 101\n"
                                "hypo.r_h3 = 3\nout.dir = " + out + "\n");
  CHECK(run("check-hypotheses --config " + cfg) == 2);
  const auto j = json::parse(slurp(fs::path(out) / "hypotheses.json"));
  CHECK(j["verdicts"]["h3"] == "FAIL");
}

TEST_CASE("malformed configuration: exit 3 with a diagnostic") {
  const auto cfg = write_config("bad.cfg", "grid.unknown_key = 1\n");
  CHECK(run("check-hypotheses --config " + cfg) == 3);
  CHECK(slurp(kRoot / "stderr.txt").find("unknown key") != std::string::npos);

  const auto cfg2 = write_config("bad2.cfg", "grid.n = 400\n");  // even n
  CHECK(run("stationary --config " + cfg2) == 3);
  CHECK(run("stationary --config " + (kRoot / "absent.cfg").string()) == 3);
}

TEST_CASE("stationary then evolve reuse the run directory") {
  const auto out = (kRoot / "out_pipe").string();
  fs::remove_all(out);
  const auto cfg = write_config("pipe.cfg", std::string(kOuBody) + "out.dir = " + out + "\n");
  REQUIRE(run("stationary --config " + cfg) == 0);
  CHECK(fs::exists(fs::path(out) / "stationary_G.csv"));
  const auto sj = json::parse(slurp(fs::path(out) / "stationary.json"));
  CHECK(sj["mass"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sj["positivity"] == "PASS");

  REQUIRE(run("evolve --config " + cfg) == 0);
  const auto dj = json::parse(slurp(fs::path(out) / "decay.json"));
  CHECK(dj["omega"].get<double>() > 0.5);
  CHECK(dj.contains("C"));
  CHECK(dj.contains("residual"));
  const auto lj = json::parse(slurp(fs::path(out) / "lp.json"));
  CHECK(lj["pass"] == true);
  // trajectory header per the external interface
  CHECK(slurp(fs::path(out) / "trajectory.csv").rfind("t,mass,min,dist_l2k,norm_lpk\n", 0) == 0);
}

TEST_CASE("spectrum and splitting emit their artifacts") {
  const auto out = (kRoot / "out_spec").string();
  fs::remove_all(out);
  const auto cfg = write_config("spec.cfg", std::string(kOuBody) + "out.dir = " + out + "\n");
  REQUIRE(run("spectrum --config " + cfg) == 0);
  const auto j = json::parse(slurp(fs::path(out) / "spectrum.json"));
  CHECK(j["a_star"].get<double>() > 0.9);
  CHECK(j["principal_positive"] == true);
  CHECK(slurp(fs::path(out) / "spectrum_eigs.csv").rfind("re,im\n", 0) == 0);

  REQUIRE(run("splitting --config " + cfg) == 0);
  const auto s = json::parse(slurp(fs::path(out) / "splitting.json"));
  CHECK(s["omega0"].get<double>() > 0.0);
  CHECK(s["n"].get<int>() == 2);  // auto-chosen cutoff scale on the OU config
  CHECK(s["bound_violations"].get<int>() == 0);
  const auto res = s["duhamel_residuals"];
  REQUIRE(res.size() == 2);
  const double ratio = res[0][1].get<double>() / res[1][1].get<double>();
  CHECK(ratio >= 1.7);
  CHECK(ratio <= 2.3);
}

TEST_CASE("nash command writes ratios and summary") {
  const auto out = (kRoot / "out_nash").string();
  fs::remove_all(out);
  const auto cfg = write_config("nash.cfg", std::string(kOuBody) + "nash.family = 16\nout.dir = " + out + "\n");
  REQUIRE(run("nash --config " + cfg) == 0);
  const auto j = json::parse(slurp(fs::path(out) / "nash.json"));
  CHECK(j["sup_ratio"].get<double>() > 0.0);
  CHECK(j["family_size"].get<int>() == 16);
  // Nash precondition violation is a config error: exit 3
  const auto badk = write_config("nashk.cfg", "weight.k = 1\nout.dir = " + out + "\n");
  CHECK(run("nash --config " + badk) == 3);
}

TEST_CASE("report: aggregation, MISSING markers, empty dir") {
  const auto out = (kRoot / "out_rep").string();
  fs::remove_all(out);
  const auto cfg = write_config("rep.cfg", std::string(kOuBody) + "out.dir = " + out + "\n");

  // empty run dir -> exit 4
  fs::create_directories(out);
  CHECK(run("report --config " + cfg) == 4);

  // partial run dir -> exit 0 with MISSING markers
  REQUIRE(run("check-hypotheses --config " + cfg) == 0);
  CHECK(run("report --config " + cfg) == 0);
  const std::string txt = slurp(fs::path(out) / "summary.txt");
  CHECK(txt.find("beta0 = -1") != std::string::npos);
  CHECK(txt.find("a_star = MISSING") != std::string::npos);

  // full pipeline -> consistency line present
  REQUIRE(run("stationary --config " + cfg) == 0);
  REQUIRE(run("evolve --config " + cfg) == 0);
  REQUIRE(run("spectrum --config " + cfg) == 0);
  CHECK(run("report --config " + cfg) == 0);
  const std::string full = slurp(fs::path(out) / "summary.txt");
  CHECK(full.find("omega <= a* + 5%: OK") != std::string::npos);
}

TEST_CASE("determinism: identical config and seed give byte-identical artifacts") {
  const auto out1 = (kRoot / "out_det1").string();
  const auto out2 = (kRoot / "out_det2").string();
  fs::remove_all(out1);
  fs::remove_all(out2);
  const auto cfg1 = write_config("det1.cfg", std::string(kOuBody) + "out.dir = " + out1 + "\n");
  const auto cfg2 = write_config("det2.cfg", std::string(kOuBody) + "out.dir = " + out2 + "\n");
  for (const auto& c : {cfg1, cfg2}) {
    REQUIRE(run("stationary --config " + c + " --seed 7") == 0);
    REQUIRE(run("evolve --config " + c + " --seed 7") == 0);
    REQUIRE(run("nash --config " + c + " --seed 7") == 0);
  }
  for (const char* name : {"stationary_G.csv", "stationary.json", "trajectory.csv",
                           "decay.json", "lp.json", "nash.csv", "nash.json"}) {
    CHECK(slurp(fs::path(out1) / name) == slurp(fs::path(out2) / name));
  }
  // a different seed changes the sampled artifacts
  const auto out3 = (kRoot / "out_det3").string();
  fs::remove_all(out3);
  const auto cfg3 = write_config("det3.cfg", std::string(kOuBody) + "out.dir = " + out3 + "\n");
  REQUIRE(run("nash --config " + cfg3 + " --seed 8") == 0);
  CHECK(slurp(fs::path(out1) / "nash.csv") != slurp(fs::path(out3) / "nash.csv"));
}
