// Experiment runner: decay sweeps, conormal-mass diagnostics, Green-identity
// traces, matrix elements, and restriction norms, driven by a JSON config.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "conormal/experiment.hpp"

namespace {

using conormal::ExperimentConfig;
using conormal::Json;

ExperimentConfig load_config(const std::string& path, const std::string& out,
                             long long seed, int jobs) {
  std::ifstream is(path);
  if (!is) throw conormal::ConfigError("cannot open config: " + path);
  Json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw conormal::ConfigError("config is not valid JSON: " +
                                std::string(e.what()));
  }
  ExperimentConfig cfg = ExperimentConfig::parse(j);
  if (!out.empty()) cfg.output_dir = out;
  if (seed >= 0) cfg.seed = std::uint64_t(seed);
  if (jobs > 0) cfg.jobs = jobs;
  if (const char* env = std::getenv("CONORMAL_OUT"); env && out.empty())
    cfg.output_dir = env;
  return cfg;
}

int dry_run(const ExperimentConfig& cfg) {
  std::cout << "config ok\n";
  std::cout << "planned h ladder (" << cfg.h_count << " rungs):\n";
  for (double h : cfg.ladder()) std::cout << "  " << conormal::csv_number(h) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenfunction averages over hypersurfaces: experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  long long seed = -1;
  int jobs = 0;
  bool dry = false;
  app.add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "worker threads");
  app.add_option("--seed", seed, "override the config seed");
  app.add_flag("--dry-run", dry, "validate and print the planned ladder");

  auto* decay = app.add_subcommand("decay-sweep", "averages along the ladder");
  auto* diag = app.add_subcommand("diagnostic", "conormal-mass diagnostic");
  auto* rellich =
      app.add_subcommand("rellich-check", "Green-identity trace on strips");
  auto* matel = app.add_subcommand("matrix-element", "<Op_h(a) phi, phi>");
  auto* norms =
      app.add_subcommand("restriction-norms", "L2 restriction norms");
  auto* validate = app.add_subcommand("validate", "validate the config only");

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = load_config(config_path, out_dir, seed, jobs);
    if (validate->parsed()) {
      std::cout << "config ok\n";
      return 0;
    }
    if (dry) return dry_run(cfg);

    conormal::RunResult result;
    if (decay->parsed()) result = conormal::run_decay_sweep(cfg);
    if (diag->parsed()) result = conormal::run_diagnostic(cfg);
    if (rellich->parsed()) result = conormal::run_rellich_check(cfg);
    if (matel->parsed()) result = conormal::run_matrix_element(cfg);
    if (norms->parsed()) result = conormal::run_restriction_norms(cfg);

    std::cout << result.summary.dump(2) << "\n";
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
