// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmreg/dataio.hpp"

namespace qmreg {

enum class SolverKind { kNqmr, kRnqmr };

/// One experiment: data source, solver settings (with optional grids over
/// omega/alpha/beta), corruption applied to the test split, and output paths.
struct ExperimentConfig {
  // Exactly one data source.
  std::string manifest_path;
  bool use_synth = false;
  int synth_classes = 5;
  int synth_per_class = 4;
  int synth_test_per_class = 2;
  Eigen::Index synth_rows = 8;
  Eigen::Index synth_cols = 8;
  Eigen::Index image_rows = 0;  // manifest target size (0 = native)
  Eigen::Index image_cols = 0;

  SolverKind solver = SolverKind::kNqmr;
  NqmrConfig nqmr;
  RnqmrConfig rnqmr;
  // Sweep values; each holds at least one entry. More than one anywhere
  // triggers a grid sweep reported by best recognition rate.
  std::vector<double> omega_grid{1.0};
  std::vector<double> alpha_grid{1.0};
  std::vector<double> beta_grid{1.0};
  FinalWeights final_weights = FinalWeights::kLastIteration;

  CorruptionRecipe corruption;
  bool corruption_seed_set = false;

  std::string out_dir = "out";
  int threads = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 0;

  void validate() const;
};

struct QueryRecord {
  int query_id = 0;
  int true_class = 0;
  int predicted_class = 0;
  bool correct = false;
  int iterations = 0;
  double wall_time_ms = 0.0;
  std::vector<double> per_class_error;
  std::vector<double> dual_trace;
};

struct ResultsRecord {
  std::vector<QueryRecord> queries;
  int correct = 0;
  int total = 0;
  double recognition_rate = 0.0;
  bool swept = false;
  double best_omega = 0.0, best_alpha = 0.0, best_beta = 0.0;
  ExperimentConfig config;
};

ExperimentConfig load_config(const std::string& path);

/// Builds the dictionary from the train split, corrupts the test split,
/// classifies every query (parallel up to cfg.threads), sweeps any grids, and
/// writes results.csv / results.json / traces.csv into cfg.out_dir.
ResultsRecord run_experiment(const ExperimentConfig& cfg);

/// Report writer used by run_experiment; exposed for tests.
void write_report(const ResultsRecord& results, const std::string& out_dir);

}  // namespace qmreg
