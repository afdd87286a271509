// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include "qmreg/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace qmreg {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for " + key + ": '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key + ": '" + value + "'");
  }
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs `work(q)` for q in [0, count) on up to `threads` workers; rethrows the
// first exception seen.
void parallel_for(int threads, size_t count, const std::function<void(size_t)>& work) {
  const int n = std::min<size_t>(std::max(threads, 1), std::max<size_t>(count, 1));
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (size_t q = next.fetch_add(1); q < count && !failed.load();
         q = next.fetch_add(1)) {
      try {
        work(q);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n - 1);
  for (int t = 0; t < n - 1; ++t) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct Dataset {
  LabeledDictionary train;
  std::vector<QuaternionMatrix> test_images;
  std::vector<int> test_labels;
};

Dataset build_dataset(const ExperimentConfig& cfg) {
  Dataset ds;
  if (cfg.use_synth) {
    SynthDataset synth =
        synth_dataset(cfg.synth_classes, cfg.synth_per_class, cfg.synth_rows,
                      cfg.synth_cols, cfg.seed, cfg.synth_test_per_class);
    ds.train = std::move(synth.train);
    ds.test_images = std::move(synth.test_images);
    ds.test_labels = std::move(synth.test_labels);
    return ds;
  }
  const auto entries = load_manifest(cfg.manifest_path);
  int max_class = 0;
  for (const auto& e : entries) {
    QuaternionMatrix img = load_image(e.path, cfg.image_rows, cfg.image_cols);
    if (e.is_train) {
      ds.train.images.push_back(std::move(img));
      ds.train.labels.push_back(e.class_id);
    } else {
      ds.test_images.push_back(std::move(img));
      ds.test_labels.push_back(e.class_id);
    }
    max_class = std::max(max_class, e.class_id);
  }
  ds.train.num_classes = max_class;
  for (size_t i = 1; i < ds.train.images.size(); ++i)
    if (!ds.train.images[i].same_shape(ds.train.images[0]))
      throw ShapeMismatch(
          "manifest images differ in size; set image.rows/image.cols to resize");
  for (const auto& img : ds.test_images)
    if (!ds.train.images.empty() && !img.same_shape(ds.train.images[0]))
      throw ShapeMismatch(
          "manifest images differ in size; set image.rows/image.cols to resize");
  return ds;
}

}  // namespace

void ExperimentConfig::validate() const {
  const bool has_manifest = !manifest_path.empty();
  if (has_manifest == use_synth)
    throw ConfigError("config: choose exactly one data source (manifest or synth)");
  if (solver == SolverKind::kRnqmr &&
      (omega_grid.empty() || alpha_grid.empty() || beta_grid.empty()))
    throw ConfigError("config: omega/alpha/beta lists must not be empty");
  if (threads < 0) throw ConfigError("config: negative thread count");
  if (out_dir.empty()) throw ConfigError("config: output directory not set");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);

  ExperimentConfig cfg;
  bool dataset_set = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    if (key == "dataset") {
      dataset_set = true;
      if (value == "synth")
        cfg.use_synth = true;
      else if (value == "manifest")
        cfg.use_synth = false;
      else
        throw ConfigError("config: dataset must be synth or manifest");
    } else if (key == "manifest.path") {
      cfg.manifest_path = value;
    } else if (key == "image.rows") {
      cfg.image_rows = parse_int(key, value);
    } else if (key == "image.cols") {
      cfg.image_cols = parse_int(key, value);
    } else if (key == "synth.classes") {
      cfg.synth_classes = static_cast<int>(parse_int(key, value));
    } else if (key == "synth.per_class") {
      cfg.synth_per_class = static_cast<int>(parse_int(key, value));
    } else if (key == "synth.test_per_class") {
      cfg.synth_test_per_class = static_cast<int>(parse_int(key, value));
    } else if (key == "synth.rows") {
      cfg.synth_rows = parse_int(key, value);
    } else if (key == "synth.cols") {
      cfg.synth_cols = parse_int(key, value);
    } else if (key == "solver") {
      if (value == "nqmr")
        cfg.solver = SolverKind::kNqmr;
      else if (value == "rnqmr")
        cfg.solver = SolverKind::kRnqmr;
      else
        throw ConfigError("config: solver must be nqmr or rnqmr");
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_int(key, value));
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "nqmr.lambda") {
      cfg.nqmr.lambda = parse_double(key, value);
    } else if (key == "nqmr.mu") {
      cfg.nqmr.mu = parse_double(key, value);
    } else if (key == "nqmr.eps_rel") {
      cfg.nqmr.eps_rel = parse_double(key, value);
    } else if (key == "nqmr.max_iter") {
      cfg.nqmr.max_iter = static_cast<int>(parse_int(key, value));
    } else if (key == "rnqmr.omega") {
      cfg.omega_grid = parse_double_list(key, value);
    } else if (key == "rnqmr.alpha") {
      cfg.alpha_grid = parse_double_list(key, value);
    } else if (key == "rnqmr.beta") {
      cfg.beta_grid = parse_double_list(key, value);
    } else if (key == "rnqmr.eta") {
      cfg.rnqmr.eta = parse_double(key, value);
    } else if (key == "rnqmr.mu") {
      cfg.rnqmr.mu = parse_double(key, value);
    } else if (key == "rnqmr.eps_log") {
      cfg.rnqmr.epsilon_log = parse_double(key, value);
    } else if (key == "rnqmr.eps_rel") {
      cfg.rnqmr.eps_rel = parse_double(key, value);
    } else if (key == "rnqmr.max_iter") {
      cfg.rnqmr.max_iter = static_cast<int>(parse_int(key, value));
    } else if (key == "rnqmr.final_weights") {
      if (value == "last")
        cfg.final_weights = FinalWeights::kLastIteration;
      else if (value == "recomputed")
        cfg.final_weights = FinalWeights::kRecomputedFromE0;
      else
        throw ConfigError("config: rnqmr.final_weights must be last or recomputed");
    } else if (key == "corrupt.block_fraction") {
      cfg.corruption.block_fraction = parse_double(key, value);
    } else if (key == "corrupt.block_source") {
      if (value == "image")
        cfg.corruption.block_source = BlockSource::kUnrelatedImage;
      else if (value == "noise")
        cfg.corruption.block_source = BlockSource::kNoise;
      else
        throw ConfigError("config: corrupt.block_source must be image or noise");
    } else if (key == "corrupt.patch") {
      cfg.corruption.patch_path = value;
    } else if (key == "corrupt.sp_probability") {
      cfg.corruption.sp_probability = parse_double(key, value);
    } else if (key == "corrupt.gaussian_variance") {
      cfg.corruption.gaussian_variance = parse_double(key, value);
    } else if (key == "corrupt.seed") {
      cfg.corruption.seed = static_cast<std::uint64_t>(parse_int(key, value));
      cfg.corruption_seed_set = true;
    } else {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
  }
  if (!dataset_set)
    throw ConfigError("config: missing 'dataset = synth|manifest'");
  return cfg;
}

ResultsRecord run_experiment(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  cfg.validate();
  if (!cfg.corruption_seed_set) cfg.corruption.seed = mix_seed(cfg.seed, 0xC0DE);

  Dataset ds = build_dataset(cfg);
  if (ds.test_images.empty())
    throw ConfigError("test split is empty; recognition rate is undefined");
  ds.train.validate();

  // Corrupt the test split; one derived stream per query.
  std::vector<QuaternionMatrix> queries(ds.test_images.size());
  for (size_t q = 0; q < queries.size(); ++q) {
    Rng rng(mix_seed(cfg.corruption.seed, q));
    QuaternionMatrix img = occlude_block(ds.test_images[q], cfg.corruption, rng);
    queries[q] = add_mixed_noise(img, cfg.corruption, rng);
  }

  const double reg = cfg.solver == SolverKind::kNqmr
                         ? cfg.nqmr.lambda / cfg.nqmr.mu
                         : cfg.rnqmr.eta / cfg.rnqmr.mu;
  const RidgeSystem ridge = build_ridge(ds.train.images, reg);
  const int threads = effective_threads(cfg.threads);

  auto evaluate = [&](const std::function<ClassificationResult(const QuaternionMatrix&)>&
                          classify_one) {
    std::vector<QueryRecord> records(queries.size());
    parallel_for(threads, queries.size(), [&](size_t q) {
      const auto t0 = std::chrono::steady_clock::now();
      ClassificationResult r = classify_one(queries[q]);
      const auto t1 = std::chrono::steady_clock::now();
      QueryRecord rec;
      rec.query_id = static_cast<int>(q);
      rec.true_class = ds.test_labels[q];
      rec.predicted_class = r.predicted;
      rec.correct = r.predicted == ds.test_labels[q];
      rec.iterations = r.iterations;
      rec.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      rec.per_class_error = std::move(r.per_class_error);
      rec.dual_trace = std::move(r.dual_trace);
      records[q] = std::move(rec);
    });
    return records;
  };

  ResultsRecord out;
  if (cfg.solver == SolverKind::kNqmr) {
    out.queries = evaluate([&](const QuaternionMatrix& b) {
      return classify_nqmr(ds.train, ridge, b, cfg.nqmr);
    });
  } else {
    int best_correct = -1;
    for (double omega : cfg.omega_grid)
      for (double alpha : cfg.alpha_grid)
        for (double beta : cfg.beta_grid) {
          RnqmrConfig rcfg = cfg.rnqmr;
          rcfg.omega = omega;
          rcfg.alpha = alpha;
          rcfg.beta = beta;
          auto records = evaluate([&](const QuaternionMatrix& b) {
            return classify_rnqmr(ds.train, ridge, b, rcfg, cfg.final_weights);
          });
          int n_correct = 0;
          for (const auto& r : records) n_correct += r.correct ? 1 : 0;
          if (n_correct > best_correct) {
            best_correct = n_correct;
            out.queries = std::move(records);
            out.best_omega = omega;
            out.best_alpha = alpha;
            out.best_beta = beta;
          }
        }
    out.swept =
        cfg.omega_grid.size() * cfg.alpha_grid.size() * cfg.beta_grid.size() > 1;
  }

  out.total = static_cast<int>(out.queries.size());
  for (const auto& r : out.queries) out.correct += r.correct ? 1 : 0;
  out.recognition_rate = out.total > 0 ? double(out.correct) / out.total : 0.0;
  out.config = cfg;
  write_report(out, cfg.out_dir);
  return out;
}

void write_report(const ResultsRecord& results, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir);

  {
    std::ofstream csv(fs::path(out_dir) / "results.csv", std::ios::binary);
    if (!csv) throw IoError("cannot write results.csv");
    csv << "queryId,trueClass,predictedClass,correct,iterations\n";
    for (const auto& q : results.queries)
      csv << q.query_id << ',' << q.true_class << ',' << q.predicted_class << ','
          << (q.correct ? 1 : 0) << ',' << q.iterations << '\n';
  }

  {
    std::ofstream traces(fs::path(out_dir) / "traces.csv", std::ios::binary);
    if (!traces) throw IoError("cannot write traces.csv");
    traces << "queryId,iteration,dual\n";
    for (const auto& q : results.queries)
      for (size_t i = 0; i < q.dual_trace.size(); ++i)
        traces << q.query_id << ',' << i + 1 << ','
               << format_double(q.dual_trace[i]) << '\n';
  }

  nlohmann::ordered_json j;
  const ExperimentConfig& cfg = results.config;
  j["config"]["dataset"] = cfg.use_synth ? "synth" : "manifest";
  if (cfg.use_synth) {
    j["config"]["synth"] = {{"classes", cfg.synth_classes},
                            {"per_class", cfg.synth_per_class},
                            {"test_per_class", cfg.synth_test_per_class},
                            {"rows", cfg.synth_rows},
                            {"cols", cfg.synth_cols}};
  } else {
    j["config"]["manifest"] = cfg.manifest_path;
    j["config"]["image_rows"] = cfg.image_rows;
    j["config"]["image_cols"] = cfg.image_cols;
  }
  j["config"]["solver"] = cfg.solver == SolverKind::kNqmr ? "nqmr" : "rnqmr";
  j["config"]["seed"] = cfg.seed;
  j["config"]["threads"] = cfg.threads;
  if (cfg.solver == SolverKind::kNqmr) {
    j["config"]["nqmr"] = {{"lambda", cfg.nqmr.lambda},
                           {"mu", cfg.nqmr.mu},
                           {"eps_rel", cfg.nqmr.eps_rel},
                           {"max_iter", cfg.nqmr.max_iter}};
  } else {
    j["config"]["rnqmr"] = {
        {"omega", cfg.omega_grid},
        {"alpha", cfg.alpha_grid},
        {"beta", cfg.beta_grid},
        {"eta", cfg.rnqmr.eta},
        {"mu", cfg.rnqmr.mu},
        {"eps_log", cfg.rnqmr.epsilon_log},
        {"eps_rel", cfg.rnqmr.eps_rel},
        {"max_iter", cfg.rnqmr.max_iter},
        {"final_weights",
         cfg.final_weights == FinalWeights::kLastIteration ? "last" : "recomputed"}};
  }
  j["config"]["corruption"] = {
      {"block_fraction", cfg.corruption.block_fraction},
      {"block_source",
       cfg.corruption.block_source == BlockSource::kNoise ? "noise" : "image"},
      {"patch", cfg.corruption.patch_path},
      {"sp_probability", cfg.corruption.sp_probability},
      {"gaussian_variance", cfg.corruption.gaussian_variance},
      {"seed", cfg.corruption.seed}};

  j["aggregate"]["correct"] = results.correct;
  j["aggregate"]["total"] = results.total;
  j["aggregate"]["recognition_rate"] = results.recognition_rate;
  if (results.swept) {
    j["aggregate"]["best"] = {{"omega", results.best_omega},
                              {"alpha", results.best_alpha},
                              {"beta", results.best_beta}};
  }

  auto& queries = j["queries"] = nlohmann::ordered_json::array();
  for (const auto& q : results.queries) {
    nlohmann::ordered_json jq;
    jq["queryId"] = q.query_id;
    jq["trueClass"] = q.true_class;
    jq["predictedClass"] = q.predicted_class;
    jq["correct"] = q.correct;
    jq["iterations"] = q.iterations;
    jq["wallTimeMs"] = q.wall_time_ms;
    jq["perClassError"] = q.per_class_error;
    queries.push_back(std::move(jq));
  }

  std::ofstream json_out(fs::path(out_dir) / "results.json", std::ios::binary);
  if (!json_out) throw IoError("cannot write results.json");
  json_out << j.dump(2) << '\n';
}

}  // namespace qmreg
