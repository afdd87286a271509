// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "qmreg/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"quaternion matrix regression experiment runner"};

  std::string config_path;
  std::string solver_override;
  std::string out_override;
  long long seed_override = -1;
  int threads_override = -1;

  app.add_option("--config", config_path, "experiment config file (key = value)")
      ->required();
  app.add_option("--solver", solver_override, "override solver: nqmr or rnqmr");
  app.add_option("--seed", seed_override, "override the master seed");
  app.add_option("--threads", threads_override, "override the worker count");
  app.add_option("--out", out_override, "override the output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    qmreg::ExperimentConfig cfg = qmreg::load_config(config_path);
    if (!solver_override.empty()) {
      if (solver_override == "nqmr")
        cfg.solver = qmreg::SolverKind::kNqmr;
      else if (solver_override == "rnqmr")
        cfg.solver = qmreg::SolverKind::kRnqmr;
      else
        throw qmreg::ConfigError("--solver must be nqmr or rnqmr");
    }
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (threads_override >= 0) cfg.threads = threads_override;
    if (!out_override.empty()) cfg.out_dir = out_override;

    const qmreg::ResultsRecord results = qmreg::run_experiment(cfg);
    std::printf("queries: %d  correct: %d  recognition rate: %.4f\n",
                results.total, results.correct, results.recognition_rate);
    if (results.swept)
      std::printf("best grid point: omega=%g alpha=%g beta=%g\n",
                  results.best_omega, results.best_alpha, results.best_beta);
    std::printf("reports written to %s\n", cfg.out_dir.c_str());
    return 0;
  } catch (const qmreg::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
