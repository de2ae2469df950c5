#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "krf/config.hpp"
#include "krf/entropy.hpp"
#include "krf/errors.hpp"
#include "krf/experiments.hpp"
#include "krf/flow.hpp"
#include "krf/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace krf;

namespace {

int default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Options shared by every subcommand that builds an initial profile.
struct InitOptions {
  std::string init = "round";
  std::string profile;
  int n_grid = 401;
  double epsilon = 0.1;
  int mode = 1;
  std::uint64_t seed = 1;
  double amplitude = 0.3;

  void attach(CLI::App* app, const std::string& init_flag) {
    app->add_option(init_flag, init, "round | perturbed | random | file")
        ->check(CLI::IsMember({"round", "perturbed", "random", "file"}));
    app->add_option("--n-grid", n_grid, "node count")->check(CLI::PositiveNumber);
    app->add_option("--epsilon", epsilon, "perturbation size");
    app->add_option("--mode", mode, "perturbation mode")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "random profile seed");
    app->add_option("--amplitude", amplitude, "random profile amplitude");
  }

  ExperimentConfig config() const {
    ExperimentConfig cfg;
    cfg.n_grid = n_grid;
    cfg.epsilon = epsilon;
    cfg.mode = mode;
    cfg.seed = seed;
    cfg.amplitude = amplitude;
    if (!profile.empty()) {
      cfg.init = InitKind::File;
      cfg.path = profile;
    } else if (init == "perturbed") {
      cfg.init = InitKind::Perturbed;
    } else if (init == "random") {
      cfg.init = InitKind::Random;
    } else if (init == "file") {
      throw ValidationError("path", "--init file needs --profile");
    } else {
      cfg.init = InitKind::Round;
    }
    return cfg;
  }
};

int cmd_flow(const std::string& config_path, const std::string& output_dir) {
  ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : parse_config(read_text(config_path));
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  const auto record = run_flow(cfg);
  const fs::path dir = fs::path(cfg.output_dir) / run_directory_name(cfg);
  write_run(record, dir);
  auto out = json::parse(to_json(summarize(record)));
  out["run_dir"] = dir.string();
  std::cout << out.dump(2) << '\n';
  if (record.failure) {
    std::cerr << error_json(*record.failure, record.failure_message) << '\n';
    return exit_code(*record.failure);
  }
  return 0;
}

int cmd_entropy(const InitOptions& init, const EntropyOptions& opts, const std::string& dump_profile,
                const std::string& dump_f) {
  const auto psi = initial_profile(init.config());
  if (!dump_profile.empty()) write_profile_csv(dump_profile, psi);
  const auto result = minimize_w(psi, opts);
  if (!dump_f.empty()) write_field_csv(dump_f, result.f, "f");
  std::cout << to_json(result) << '\n';
  return 0;
}

int cmd_path(const InitOptions& init, int points, int workers, const std::string& output_dir) {
  RunSink sink;
  if (!output_dir.empty()) {
    sink = [&](const RunRecord& r) { write_run(r, fs::path(output_dir) / run_directory_name(r.config)); };
  }
  const auto report = continuity_path(init.config(), points, workers, sink);
  std::cout << to_json(report) << '\n';
  return report.all_converged ? 0 : 3;
}

int cmd_stability(const InitOptions& init, double eps, double amp_cap, int iterations) {
  auto cfg = init.config();
  cfg.entropy_every = cfg.t_max;
  std::cout << to_json(stability_probe(eps, cfg, amp_cap, iterations)) << '\n';
  return 0;
}

int cmd_spectrum(int n_grid, std::size_t count, bool as_json) {
  const auto s = spectrum_oracle(Grid::from_nodes(n_grid));
  if (as_json) {
    std::cout << to_json(s, count) << '\n';
    return 0;
  }
  std::printf("leading_rate %s\nnear_null %zu\n", format_double(s.leading_rate).c_str(), static_cast<std::size_t>(s.near_null));
  std::printf("%4s  %22s  %22s\n", "#", "re", "im");
  for (std::size_t i = 0; i < std::min(count, s.eigenvalues.size()); ++i) {
    std::printf("%4zu  %22.15g  %22.15g\n", i, s.eigenvalues[i].real(), s.eigenvalues[i].imag());
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& dirs, bool as_json) {
  json all = json::array();
  if (!as_json) {
    std::printf("%-28s %5s %9s %14s %10s %8s %10s %4s %4s\n", "run", "conv", "t_final", "lambda_hat", "delta",
                "r2", "max|f|", "mono", "sign");
  }
  for (const auto& d : dirs) {
    const auto s = read_summary(d);
    auto j = json::parse(to_json(s));
    j["run_dir"] = d;
    all.push_back(j);
    if (!as_json) {
      std::printf("%-28s %5s %9.4f %14.10f %10.5f %8.5f %10.3e %4d %4s\n", fs::path(d).filename().c_str(),
                  s.converged ? "yes" : "no", s.t_final, s.lambda_hat_final, s.decay_delta, s.decay_r2,
                  s.max_f_sup, s.monotonicity_violations, s.empirical_sign_prop44.c_str());
    }
  }
  if (as_json) std::cout << all.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kaehler-Ricci flow experiments on rotationally symmetric metrics of CP^1"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  auto* flow = app.add_subcommand("flow", "evolve one config and write its run directory");
  flow->add_option("--config", config_path, "key = value config file");
  flow->add_option("--output-dir", output_dir, "overrides output_dir from the config");

  InitOptions ent_init;
  EntropyOptions ent_opts;
  std::string dump_profile, dump_f;
  auto* entropy = app.add_subcommand("entropy", "minimize W on a profile and print the result as JSON");
  entropy->add_option("--profile", ent_init.profile, "profile CSV (mu,psi)");
  ent_init.attach(entropy, "--init");
  entropy->add_option("--tol", ent_opts.tol, "residual tolerance");
  entropy->add_option("--max-iterations", ent_opts.max_iterations);
  entropy->add_option("--multistart", ent_opts.multistart, "extra random starts");
  entropy->add_option("--dump-profile", dump_profile, "write the profile used as CSV");
  entropy->add_option("--dump-f", dump_f, "write the minimizer as CSV (mu,f)");

  InitOptions path_init;
  path_init.init = "perturbed";
  path_init.epsilon = 0.25;
  path_init.mode = 2;
  int points = 11, workers = default_workers();
  std::string path_out;
  auto* path = app.add_subcommand("path", "continuity path from round to a target profile");
  path_init.attach(path, "--target");
  path->add_option("--points", points)->check(CLI::Range(2, 10000));
  path->add_option("--workers", workers)->check(CLI::PositiveNumber);
  path->add_option("--output-dir", path_out, "also write each run directory here");

  InitOptions stab_init;
  stab_init.init = "perturbed";
  stab_init.n_grid = 201;
  double eps = 0.5, amp_cap = 0.2;
  int iterations = 12;
  auto* stability = app.add_subcommand("stability", "largest stable perturbation amplitude at a C^3 radius");
  stab_init.attach(stability, "--direction");
  stability->add_option("--eps", eps, "C^3 radius")->check(CLI::PositiveNumber);
  stability->add_option("--amp-cap", amp_cap)->check(CLI::PositiveNumber);
  stability->add_option("--iterations", iterations)->check(CLI::PositiveNumber);

  int spec_n = 401;
  std::size_t count = 10;
  bool spec_json = false;
  auto* spectrum = app.add_subcommand("spectrum", "linearized spectrum at the round metric");
  spectrum->add_option("--n-grid", spec_n)->check(CLI::Range(5, 100000));
  spectrum->add_option("--count", count);
  spectrum->add_flag("--json", spec_json);

  std::vector<std::string> report_dirs;
  bool report_json = false;
  auto* report = app.add_subcommand("report", "tabulate run directories");
  report->add_option("dirs", report_dirs)->required();
  report->add_flag("--json", report_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    std::cerr << error_json(ErrorKind::ParseError, e.what()) << '\n';
    return 2;
  }

  try {
    if (*flow) return cmd_flow(config_path, output_dir);
    if (*entropy) return cmd_entropy(ent_init, ent_opts, dump_profile, dump_f);
    if (*path) return cmd_path(path_init, points, workers, path_out);
    if (*stability) return cmd_stability(stab_init, eps, amp_cap, iterations);
    if (*spectrum) return cmd_spectrum(spec_n, count, spec_json);
    if (*report) return cmd_report(report_dirs, report_json);
  } catch (const Error& e) {
    std::cerr << error_json(e.kind(), e.what()) << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}, {"exit_code", 3}}.dump() << '\n';
    return 3;
  }
  return 0;
}
