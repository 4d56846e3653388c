#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "conormal/experiment.hpp"

using namespace conormal;

namespace {

Json base_config() {
  return Json{
      {"geometry",
       {{"manifold", "torus2"},
        {"hypersurface", {{"kind", "circle"}, {"axis", 2}, {"level", 0.0}}}}},
      {"family", {{"family", "plane_wave"}, {"k", {1, 0}}}},
      {"h_count", 8}};
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("configs parse and expose the planned ladder") {
  const ExperimentConfig cfg = ExperimentConfig::parse(base_config());
  const auto hs = cfg.ladder();
  CHECK(hs.size() == 8);
  CHECK(hs.front() == doctest::Approx(1.0 / kTwoPi));
}

TEST_CASE("unknown keys are rejected by name") {
  Json j = base_config();
  j["h_coutn"] = 40;  // typo
  try {
    ExperimentConfig::parse(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("h_coutn") != std::string::npos);
  }
}

TEST_CASE("nested descriptor keys are validated too") {
  Json j = base_config();
  j["geometry"]["hypersurface"]["lvel"] = 0.0;
  CHECK_THROWS_AS(ExperimentConfig::parse(j), ConfigError);
  Json j2 = base_config();
  j2["family"]["weird"] = 1;
  CHECK_THROWS_AS(ExperimentConfig::parse(j2), ConfigError);
}

TEST_CASE("geometry round-trips through its descriptor") {
  for (const Hypersurface& H :
       {Hypersurface::torus_circle(1, 0.25),
        Hypersurface::torus_geodesic(2, 1, Vec2(0.1, 0.0)),
        Hypersurface::sphere_latitude(0.4), Hypersurface::sphere_equator()}) {
    const Hypersurface back = hypersurface_from_json(hypersurface_to_json(H));
    CHECK(back.kind == H.kind);
    CHECK(back.length == doctest::Approx(H.length));
  }
}

TEST_CASE("family descriptors build the matching families") {
  const EigenFamily shell = family_from_json(
      Json{{"family", "torus_shell"}, {"seed", 17}, {"shell", 25}});
  CHECK(shell.kind() == FamilyKind::TorusRandomShell);
  CHECK(shell.seed() == 17);
  CHECK(shell.admissible_h(1)[0] == doctest::Approx(1.0 / (kTwoPi * 5.0)));

  const EigenFamily beam = family_from_json(Json{{"family", "sphere_beam"}});
  CHECK(beam.kind() == FamilyKind::SphereGaussianBeam);

  CHECK_THROWS_AS(family_from_json(Json{{"family", "unknown"}}), ConfigError);
}

TEST_CASE("collar symbols are expressible in config form") {
  const Hypersurface H = Hypersurface::torus_circle(2, 0.0);
  const Symbol a = symbol_from_json(
      Json{{"beta_delta", 0.1}, {"chi_alpha", 0.05}, {"xin_power", 2}}, H);
  REQUIRE(a.collar.has_value());
  CHECK(a.collar->delta == doctest::Approx(0.1));
  CHECK(a.collar->power == 2);
  // on-axis evaluation: chi factor 1, beta factor 1, xi_n^2; the cutoff
  // lives through its truncated Fourier series, hence the loose tolerance
  const Complex v = a.eval(Vec2(0.3, 0.0), Vec2(0.0, 0.7));
  CHECK(std::real(v) == doctest::Approx(0.49).epsilon(0.01));
}

TEST_CASE("fourier-table symbols evaluate their series") {
  const Hypersurface H = Hypersurface::torus_circle(2, 0.0);
  const Symbol a =
      symbol_from_json(Json{{"fourier", {{1, 0, 0.5, 0.0}, {-1, 0, 0.5, 0.0}}}},
                       H);
  const Complex v = a.eval(Vec2(0.2, 0.9), Vec2(1, 0));
  CHECK(std::real(v) == doctest::Approx(std::cos(kTwoPi * 0.2)).epsilon(1e-12));
}

TEST_CASE("runs are byte-reproducible") {
  ExperimentConfig cfg = ExperimentConfig::parse(base_config());
  cfg.output_dir = "/tmp/conormal_repro_a";
  const RunResult r1 = run_decay_sweep(cfg);
  cfg.output_dir = "/tmp/conormal_repro_b";
  const RunResult r2 = run_decay_sweep(cfg);
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(slurp("/tmp/conormal_repro_a/decay.csv") ==
        slurp("/tmp/conormal_repro_b/decay.csv"));
  CHECK(!slurp("/tmp/conormal_repro_a/decay.csv").empty());
}

TEST_CASE("tolerance violations exit with code 2") {
  Json j = base_config();
  j["tolerances"] = {{"max_abs_avg", 1e-30}};
  // transverse circle gives exact zeros; flip to the conormal circle so the
  // averages are 1 and the bound must fail
  j["geometry"]["hypersurface"]["axis"] = 1;
  ExperimentConfig cfg = ExperimentConfig::parse(j);
  cfg.output_dir = "/tmp/conormal_tolfail";
  const RunResult r = run_decay_sweep(cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.summary["pass"] == false);
}

TEST_CASE("diagnostic runs emit the verdict block") {
  Json j = base_config();
  j["t0_grid"] = {0.25, 0.125};
  j["tolerances"] = {{"expect_verdict", "diffuse"}, {"estimate_max", 1e-10}};
  ExperimentConfig cfg = ExperimentConfig::parse(j);
  cfg.output_dir = "/tmp/conormal_diag";
  const RunResult r = run_diagnostic(cfg);
  CHECK(r.exit_code == 0);
  const Json verdict = Json::parse(slurp("/tmp/conormal_diag/verdict.json"));
  CHECK(verdict["verdict"] == "diffuse");
  const std::string csv = slurp("/tmp/conormal_diag/diagnostic.csv");
  CHECK(csv.rfind("delta,t0,quotient,stderr\n", 0) == 0);
  CHECK(csv.find("\r") == std::string::npos);  // LF endings only
}

TEST_CASE("matrix-element runs demand symbols") {
  ExperimentConfig cfg = ExperimentConfig::parse(base_config());
  CHECK_THROWS_AS(run_matrix_element(cfg), ConfigError);
}

TEST_CASE("csv numbers carry full precision with a dot separator") {
  CHECK(csv_number(0.1) == "0.10000000000000001");
  CHECK(csv_number(1.0) == "1");
  CHECK(csv_number(1e-12).find('.') != std::string::npos);
}

TEST_CASE("decay CSV carries the exact column set") {
  ExperimentConfig cfg = ExperimentConfig::parse(base_config());
  cfg.output_dir = "/tmp/conormal_cols";
  run_decay_sweep(cfg);
  const std::string csv = slurp("/tmp/conormal_cols/decay.csv");
  CHECK(csv.rfind("h,re_avg,im_avg,re_normal_avg,im_normal_avg,"
                  "l2_restriction,l2_normal,beta_delta,microlocalized_norm\n",
                  0) == 0);
}

TEST_CASE("worker count does not change the bytes") {
  ExperimentConfig cfg = ExperimentConfig::parse(base_config());
  cfg.output_dir = "/tmp/conormal_j1";
  cfg.jobs = 1;
  run_decay_sweep(cfg);
  cfg.output_dir = "/tmp/conormal_j4";
  cfg.jobs = 4;
  run_decay_sweep(cfg);
  CHECK(slurp("/tmp/conormal_j1/decay.csv") ==
        slurp("/tmp/conormal_j4/decay.csv"));
}
