// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmreg/experiment.hpp"

using namespace qmreg;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qmreg_exp_" + std::to_string(std::rand()) +
            std::to_string(reinterpret_cast<uintptr_t>(this) & 0xffff));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_synth_config(const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.use_synth = true;
  cfg.synth_classes = 3;
  cfg.synth_per_class = 3;
  cfg.synth_test_per_class = 1;
  cfg.synth_rows = 6;
  cfg.synth_cols = 6;
  cfg.seed = 5;
  cfg.threads = 2;
  cfg.out_dir = out_dir;
  return cfg;
}

}  // namespace

TEST_CASE("config files parse into the full settings structure") {
  TempDir tmp;
  {
    std::ofstream out(tmp.file("exp.conf"));
    out << "# synthetic robustness run\n";
    out << "dataset = synth\n";
    out << "synth.classes = 4\n";
    out << "synth.per_class = 5\n";
    out << "synth.test_per_class = 2\n";
    out << "synth.rows = 8\n";
    out << "synth.cols = 7\n";
    out << "solver = rnqmr\n";
    out << "seed = 31\n";
    out << "threads = 3\n";
    out << "out = results_dir\n";
    out << "rnqmr.omega = 0.01, 0.1, 1, 10\n";
    out << "rnqmr.alpha = 0.1\n";
    out << "rnqmr.beta = 1, 10\n";
    out << "rnqmr.eta = 2\n";
    out << "rnqmr.eps_log = 0.02\n";
    out << "rnqmr.max_iter = 50\n";
    out << "rnqmr.final_weights = recomputed\n";
    out << "corrupt.block_fraction = 0.3\n";
    out << "corrupt.block_source = noise\n";
    out << "corrupt.sp_probability = 0.1\n";
    out << "corrupt.gaussian_variance = 0.01\n";
    out << "corrupt.seed = 77\n";
  }
  const ExperimentConfig cfg = load_config(tmp.file("exp.conf"));
  CHECK(cfg.use_synth);
  CHECK(cfg.synth_classes == 4);
  CHECK(cfg.synth_cols == 7);
  CHECK(cfg.solver == SolverKind::kRnqmr);
  CHECK(cfg.seed == 31);
  CHECK(cfg.threads == 3);
  CHECK(cfg.out_dir == "results_dir");
  CHECK(cfg.omega_grid == std::vector<double>{0.01, 0.1, 1, 10});
  CHECK(cfg.alpha_grid == std::vector<double>{0.1});
  CHECK(cfg.beta_grid == std::vector<double>{1, 10});
  CHECK(cfg.rnqmr.eta == 2.0);
  CHECK(cfg.rnqmr.epsilon_log == 0.02);
  CHECK(cfg.rnqmr.max_iter == 50);
  CHECK(cfg.final_weights == FinalWeights::kRecomputedFromE0);
  CHECK(cfg.corruption.block_fraction == 0.3);
  CHECK(cfg.corruption.block_source == BlockSource::kNoise);
  CHECK(cfg.corruption.seed == 77);
  CHECK(cfg.corruption_seed_set);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config errors are reported with context") {
  TempDir tmp;
  auto write_and_load = [&](const std::string& body) {
    const std::string p = tmp.file("bad.conf");
    std::ofstream out(p);
    out << body;
    out.close();
    return load_config(p);
  };
  CHECK_THROWS_AS(write_and_load("dataset = maybe\n"), ConfigError);
  CHECK_THROWS_AS(write_and_load("dataset = synth\nsolver = qqq\n"), ConfigError);
  CHECK_THROWS_AS(write_and_load("dataset = synth\nnqmr.lambda = abc\n"),
                  ConfigError);
  CHECK_THROWS_AS(write_and_load("dataset = synth\nwhatever = 1\n"), ConfigError);
  CHECK_THROWS_AS(write_and_load("dataset = synth\nno equals sign\n"), ConfigError);
  CHECK_THROWS_AS(write_and_load("nqmr.mu = 1\n"), ConfigError);  // dataset missing
  CHECK_THROWS_AS(load_config(tmp.file("absent.conf")), ConfigError);

  // exactly one data source
  ExperimentConfig both;
  both.use_synth = true;
  both.manifest_path = "x.csv";
  CHECK_THROWS_AS(both.validate(), ConfigError);
  ExperimentConfig neither;
  neither.use_synth = false;
  CHECK_THROWS_AS(neither.validate(), ConfigError);
}

TEST_CASE("clean synthetic nqmr experiments reach full recognition") {
  TempDir tmp;
  const ExperimentConfig cfg = small_synth_config(tmp.file("out"));
  const ResultsRecord res = run_experiment(cfg);
  CHECK(res.total == 3);
  CHECK(res.correct == 3);
  CHECK(res.recognition_rate == 1.0);
  CHECK(!res.swept);

  CHECK(fs::exists(tmp.file("out") + "/results.csv"));
  CHECK(fs::exists(tmp.file("out") + "/results.json"));
  CHECK(fs::exists(tmp.file("out") + "/traces.csv"));

  const std::string csv = slurp(tmp.file("out") + "/results.csv");
  CHECK(csv.rfind("queryId,trueClass,predictedClass,correct,iterations\n", 0) == 0);
  // one line per query plus header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("aggregate rate equals the mean of per-query correctness") {
  TempDir tmp;
  ExperimentConfig cfg = small_synth_config(tmp.file("out"));
  cfg.corruption.block_fraction = 0.4;
  cfg.corruption.sp_probability = 0.2;
  const ResultsRecord res = run_experiment(cfg);
  int correct = 0;
  for (const auto& q : res.queries) correct += q.correct ? 1 : 0;
  CHECK(res.correct == correct);
  CHECK(res.recognition_rate == doctest::Approx(double(correct) / res.total));
}

TEST_CASE("rnqmr sweeps report the best grid point") {
  TempDir tmp;
  ExperimentConfig cfg = small_synth_config(tmp.file("out"));
  cfg.solver = SolverKind::kRnqmr;
  cfg.omega_grid = {0.1, 1.0};
  cfg.alpha_grid = {0.1};
  cfg.beta_grid = {10.0};
  cfg.rnqmr.max_iter = 40;
  const ResultsRecord res = run_experiment(cfg);
  CHECK(res.swept);
  CHECK((res.best_omega == 0.1 || res.best_omega == 1.0));
  CHECK(res.best_alpha == 0.1);
  CHECK(res.best_beta == 10.0);
  CHECK(res.recognition_rate == 1.0);

  const std::string json = slurp(tmp.file("out") + "/results.json");
  CHECK(json.find("\"best\"") != std::string::npos);
  CHECK(json.find("\"recognition_rate\"") != std::string::npos);
}

TEST_CASE("identical seeds give byte-identical reports") {
  TempDir tmp;
  ExperimentConfig cfg = small_synth_config(tmp.file("out_a"));
  cfg.corruption.block_fraction = 0.3;
  cfg.corruption.sp_probability = 0.1;
  cfg.corruption.gaussian_variance = 0.01;
  cfg.threads = 4;
  run_experiment(cfg);
  cfg.out_dir = tmp.file("out_b");
  cfg.threads = 1;  // thread count must not affect the outputs
  run_experiment(cfg);

  CHECK(slurp(tmp.file("out_a") + "/results.csv") ==
        slurp(tmp.file("out_b") + "/results.csv"));
  CHECK(slurp(tmp.file("out_a") + "/traces.csv") ==
        slurp(tmp.file("out_b") + "/traces.csv"));
}

TEST_CASE("an empty test split is a config error") {
  TempDir tmp;
  ExperimentConfig cfg = small_synth_config(tmp.file("out"));
  cfg.synth_test_per_class = 0;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("manifest-backed experiments run end to end") {
  TempDir tmp;
  // Two classes distinguished by spatial structure (a diagonal versus an
  // anti-diagonal stripe); solid colors alone cannot separate classes because
  // a quaternion coefficient is free to rotate one hue into another.
  auto write_ppm = [&](const std::string& name, bool diagonal, int jitter) {
    std::ofstream out(tmp.file(name), std::ios::binary);
    out << "P6\n6 6\n255\n";
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const bool bright = diagonal ? (i == j) : (i + j == 5);
        const int v = (bright ? 220 : 40) + jitter;
        out.put(static_cast<char>(v));
        out.put(static_cast<char>(v / 2));
        out.put(static_cast<char>(255 - v));
      }
  };
  write_ppm("c1a.ppm", true, 0);
  write_ppm("c1b.ppm", true, 8);
  write_ppm("c1q.ppm", true, 4);
  write_ppm("c2a.ppm", false, 0);
  write_ppm("c2b.ppm", false, 8);
  write_ppm("c2q.ppm", false, 4);
  {
    std::ofstream out(tmp.file("set.csv"));
    out << "c1a.ppm,1,train\nc1b.ppm,1,train\nc1q.ppm,1,test\n";
    out << "c2a.ppm,2,train\nc2b.ppm,2,train\nc2q.ppm,2,test\n";
  }

  ExperimentConfig cfg;
  cfg.manifest_path = tmp.file("set.csv");
  cfg.out_dir = tmp.file("out");
  cfg.threads = 1;
  const ResultsRecord res = run_experiment(cfg);
  CHECK(res.total == 2);
  CHECK(res.recognition_rate == 1.0);
}
