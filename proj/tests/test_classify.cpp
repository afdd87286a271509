// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include <doctest.h>

#include "qmreg/classify.hpp"
#include "qmreg/dataio.hpp"
#include "test_util.hpp"

using namespace qmreg;
using qmreg::testing::TestRng;
using qmreg::testing::max_abs_diff;

TEST_CASE("restrict_coeffs zeroes the other classes and partitions x") {
  TestRng rng(3);
  const QuaternionVector x = rng.vector(6);
  const std::vector<int> labels{1, 2, 1, 3, 2, 3};

  CHECK(max_abs_diff(restrict_coeffs(x, 1, std::vector<int>{1, 1, 1, 1, 1, 1}), x) ==
        0.0);
  CHECK(restrict_coeffs(x, 4, labels).l2_norm() == 0.0);

  QuaternionVector sum(6);
  for (int k = 1; k <= 3; ++k) {
    const QuaternionVector part = restrict_coeffs(x, k, labels);
    for (int c = 0; c < 4; ++c) sum.component(c) += part.component(c);
  }
  CHECK(max_abs_diff(sum, x) == 0.0);

  CHECK_THROWS_AS(restrict_coeffs(x, 1, std::vector<int>{1, 2}), ShapeMismatch);
}

TEST_CASE("argmin over class errors breaks ties toward the lowest id") {
  const std::vector<double> unique{2.0, 0.5, 1.0};
  CHECK(smallest_error_class(unique) == 2);
  const std::vector<double> tied{2.0, 1.0, 1.0};
  CHECK(smallest_error_class(tied) == 2);
  const std::vector<double> all_tied{1.0, 1.0, 1.0};
  CHECK(smallest_error_class(all_tied) == 1);
  CHECK_THROWS_AS(smallest_error_class(std::vector<double>{}), ConfigError);
}

TEST_CASE("scaling all errors never changes the argmin") {
  TestRng rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> errors(5);
    for (auto& e : errors) e = rng.uniform(0, 10);
    const int base = smallest_error_class(errors);
    const double c = rng.uniform(0.1, 7.0);
    std::vector<double> scaled = errors;
    for (auto& e : scaled) e *= c;
    CHECK(smallest_error_class(scaled) == base);
  }
}

TEST_CASE("a single class always wins with zero error") {
  TestRng rng(7);
  LabeledDictionary dict;
  dict.num_classes = 1;
  for (int l = 0; l < 3; ++l) {
    dict.images.push_back(rng.pure_matrix(5, 5));
    dict.labels.push_back(1);
  }
  const QuaternionMatrix b = rng.pure_matrix(5, 5);

  const ClassificationResult nq = classify_nqmr(dict, b, NqmrConfig{});
  CHECK(nq.predicted == 1);
  CHECK(nq.per_class_error[0] < 1e-10);  // delta_1(x) == x exactly

  const ClassificationResult rq = classify_rnqmr(dict, b, RnqmrConfig{});
  CHECK(rq.predicted == 1);
  CHECK(rq.per_class_error[0] < 1e-10);
}

TEST_CASE("an exact dictionary member is assigned to its class") {
  TestRng rng(11);
  LabeledDictionary dict;
  dict.num_classes = 4;
  for (int k = 1; k <= 4; ++k) {
    dict.images.push_back(rng.pure_matrix(6, 6));
    dict.labels.push_back(k);
  }
  NqmrConfig cfg;
  cfg.lambda = 1e-6;
  const ClassificationResult res = classify_nqmr(dict, dict.images[1], cfg);
  CHECK(res.predicted == 2);
}

TEST_CASE("uniform weights reproduce the nuclear-norm ranking") {
  TestRng rng(13);
  LabeledDictionary dict;
  dict.num_classes = 3;
  for (int k = 1; k <= 3; ++k)
    for (int s = 0; s < 2; ++s) {
      dict.images.push_back(rng.pure_matrix(5, 5));
      dict.labels.push_back(k);
    }
  const QuaternionVector x = rng.vector(6);

  const std::vector<double> nuclear = per_class_errors_nuclear(dict, x);
  const double c = 2.7;
  const std::vector<double> weighted =
      per_class_errors_weighted(dict, x, Eigen::VectorXd::Constant(5, c));
  REQUIRE(nuclear.size() == weighted.size());
  for (size_t k = 0; k < nuclear.size(); ++k)
    CHECK(weighted[k] == doctest::Approx(c * nuclear[k]).epsilon(1e-9));
  CHECK(smallest_error_class(nuclear) == smallest_error_class(weighted));
}

TEST_CASE("separable synthetic data classifies perfectly when clean") {
  const SynthDataset ds = synth_dataset(5, 3, 8, 8, 99, 1);

  NqmrConfig ncfg;
  const RidgeSystem ridge = build_ridge(ds.train.images, ncfg.lambda / ncfg.mu);
  for (size_t q = 0; q < ds.test_images.size(); ++q) {
    const ClassificationResult res =
        classify_nqmr(ds.train, ridge, ds.test_images[q], ncfg);
    CHECK(res.predicted == ds.test_labels[q]);
  }
}

TEST_CASE("corrupted queries on separable data match the truth with rnqmr") {
  const SynthDataset ds = synth_dataset(4, 3, 8, 8, 123, 1);

  RnqmrConfig cfg;
  cfg.omega = 0.1;
  cfg.alpha = 0.1;
  cfg.beta = 10.0;
  const RidgeSystem ridge = build_ridge(ds.train.images, cfg.eta / cfg.mu);

  TestRng noise(17);
  for (size_t q = 0; q < ds.test_images.size(); ++q) {
    QuaternionMatrix b = ds.test_images[q];
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        if (noise.uniform(0, 1) < 0.10)
          b.set(i, j, {0.0, noise.uniform(0, 1) < 0.5 ? 0.0 : 1.0,
                       noise.uniform(0, 1) < 0.5 ? 0.0 : 1.0,
                       noise.uniform(0, 1) < 0.5 ? 0.0 : 1.0});
    const ClassificationResult res = classify_rnqmr(ds.train, ridge, b, cfg);
    CHECK(res.predicted == ds.test_labels[q]);
  }
}

TEST_CASE("both final-weight interpretations are available") {
  const SynthDataset ds = synth_dataset(3, 2, 6, 6, 7, 1);
  RnqmrConfig cfg;
  const RidgeSystem ridge = build_ridge(ds.train.images, cfg.eta / cfg.mu);
  const auto last = classify_rnqmr(ds.train, ridge, ds.test_images[0], cfg,
                                   FinalWeights::kLastIteration);
  const auto recomputed = classify_rnqmr(ds.train, ridge, ds.test_images[0], cfg,
                                         FinalWeights::kRecomputedFromE0);
  CHECK(last.per_class_error.size() == recomputed.per_class_error.size());
  CHECK(last.predicted == ds.test_labels[0]);
  CHECK(recomputed.predicted == ds.test_labels[0]);
}

TEST_CASE("dictionary validation rejects malformed label sets") {
  LabeledDictionary dict;
  dict.num_classes = 2;
  dict.images.push_back(QuaternionMatrix(3, 3));
  dict.labels.push_back(1);
  CHECK_THROWS_AS(dict.validate(), ConfigError);  // fewer images than classes

  dict.images.push_back(QuaternionMatrix(3, 3));
  dict.labels.push_back(3);  // out of range
  CHECK_THROWS_AS(dict.validate(), ConfigError);

  dict.labels.back() = 2;
  CHECK_NOTHROW(dict.validate());
}
