#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "krf/config.hpp"
#include "krf/errors.hpp"
#include "krf/experiments.hpp"
#include "krf/io.hpp"

using namespace krf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("krflow-test-" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("empty config gives defaults") {
  const auto c = parse_config("");
  CHECK(c == ExperimentConfig{});
  CHECK(c.n_grid == 401);
  CHECK(c.init == InitKind::Round);
  CHECK(c.t_max == 50.0);
  CHECK(c.tol_converge == 1e-5);
  CHECK(c.cfl_safety == 0.2);
  CHECK(c.record_every == 0.05);
  CHECK(c.entropy_every == 0.5);
}

TEST_CASE("config parsing") {
  const auto c = parse_config("init = perturbed\nepsilon = 0.1\nmode = 1\n# comment\n  n_grid = 201  # trailing\n");
  CHECK(c.init == InitKind::Perturbed);
  CHECK(c.epsilon == 0.1);
  CHECK(c.mode == 1);
  CHECK(c.n_grid == 201);

  try {
    parse_config("n_grid = -5");
    CHECK(false);
  } catch (const ValidationError& e) {
    CHECK(e.key() == "n_grid");
    CHECK(exit_code(e.kind()) == 2);
  }
  try {
    parse_config("t_max = 1\nbogus = 3\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_config("no equals sign"), ParseError);
  CHECK_THROWS_AS(parse_config("n_grid = 400"), ValidationError);
  CHECK_THROWS_AS(parse_config("init = file"), ValidationError);
  CHECK_THROWS_AS(parse_config("t_max = abc"), ValidationError);
}

TEST_CASE("config canonical round trip") {
  ExperimentConfig c;
  c.init = InitKind::Random;
  c.seed = 17;
  c.amplitude = 0.3;
  c.blend = 0.1;
  c.entropy_tol = 3e-9;
  c.record_every = 0.1;
  CHECK(parse_config(render_config(c)) == c);
  CHECK(render_config(parse_config(render_config(c))) == render_config(c));
  auto d = c;
  d.output_dir = "elsewhere";
  CHECK(config_hash(c) == config_hash(d));
  d.seed = 18;
  CHECK(config_hash(c) != config_hash(d));
  CHECK(run_directory_name(c).rfind("run-", 0) == 0);
  CHECK(run_directory_name(c).size() == 20);
}

TEST_CASE("number formatting round trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(parse_double(format_double(x)) == x);
  CHECK(std::isnan(parse_double(format_double(std::nan("")))));
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("profile csv round trip") {
  const auto dir = scratch("profile");
  fs::create_directories(dir);
  const auto p = random_profile(Grid(64), 5, 0.3);
  write_profile_csv(dir / "p.csv", p);
  CHECK(read_profile_csv(dir / "p.csv") == p);
  CHECK(read_text(dir / "p.csv").rfind("mu,psi\n0,0\n", 0) == 0);
  write_field_csv(dir / "f.csv", ScalarField::zeros(Grid(64)));
  CHECK(read_text(dir / "f.csv").rfind("mu,f\n", 0) == 0);
  write_text(dir / "bad.csv", "mu,psi\n0,0\n0.5,1\n");
  CHECK_THROWS_AS(read_profile_csv(dir / "bad.csv"), Error);
  try {
    read_profile_csv(dir / "missing.csv");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
    CHECK(exit_code(e.kind()) == 4);
  }
  fs::remove_all(dir);
}

TEST_CASE("run directory round trip") {
  ExperimentConfig cfg;
  cfg.n_grid = 65;
  cfg.init = InitKind::Perturbed;
  cfg.entropy_every = 0.25;
  const auto rec = run_flow(cfg);
  const auto dir = scratch("run") / run_directory_name(cfg);
  write_run(rec, dir);
  for (const char* f : {"config.cfg", "series.csv", "summary.json", "entropy.csv", "final.csv"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto back = read_run(dir);
  CHECK(back.config == rec.config);
  CHECK(series_csv(back.rows) == series_csv(rec.rows));
  CHECK(back.entropy == rec.entropy);
  CHECK(back.converged == rec.converged);
  CHECK(back.t_final == rec.t_final);
  CHECK(*back.final_profile == *rec.final_profile);
  CHECK(read_text(dir / "series.csv").rfind(
            "t,lambda_hat,k_energy,H,h_sup,grad_h_sup,lap_h_sup,f_sup,grad_f_l2,lap_f_l2,f_weighted_mean,"
            "soliton_resid,diam,dist_c3_round,a_t,dt\n",
            0) == 0);
  const auto summary = read_summary(dir);
  CHECK(summary.converged);
  CHECK(summary.monotonicity_violations == 0);
  CHECK_THROWS_AS(read_run(scratch("nothing")), Error);
  fs::remove_all(dir.parent_path());
}

TEST_CASE("checkpoint round trip") {
  const auto dir = scratch("ckpt");
  const FlowState s{1.25, perturbed_profile(Grid(64), 0.1, 2), 3.5e-5};
  write_checkpoint(dir, s, 0xfeedULL);
  const auto c = read_checkpoint(dir);
  CHECK(c.state.t == s.t);
  CHECK(c.state.dt_last == s.dt_last);
  CHECK(c.state.psi == s.psi);
  CHECK(c.config_hash == 0xfeedULL);
  fs::remove_all(dir);
}

TEST_CASE("json outputs") {
  const auto e = minimize_w(round_profile(Grid(64)));
  const auto j = to_json(e);
  CHECK(j.find("\"lambda_hat\"") != std::string::npos);
  CHECK(j.find("\"multistart_spread\"") != std::string::npos);
  const auto err = error_json(ErrorKind::IoError, "x");
  CHECK(err.find("\"exit_code\":4") != std::string::npos);
}
