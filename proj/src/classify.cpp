// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include "qmreg/classify.hpp"

#include <algorithm>

namespace qmreg {

void LabeledDictionary::validate() const {
  if (num_classes < 1) throw ConfigError("LabeledDictionary: need at least one class");
  if (images.size() < static_cast<size_t>(num_classes))
    throw ConfigError("LabeledDictionary: fewer images than classes");
  if (images.size() != labels.size())
    throw ConfigError("LabeledDictionary: image/label counts differ");
  for (int label : labels)
    if (label < 1 || label > num_classes)
      throw ConfigError("LabeledDictionary: class id out of range");
}

QuaternionVector restrict_coeffs(const QuaternionVector& x, int k,
                                 std::span<const int> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != x.size())
    throw ShapeMismatch("restrict_coeffs: label count differs from coefficients");
  QuaternionVector out = x;
  for (Eigen::Index l = 0; l < x.size(); ++l)
    if (labels[l] != k)
      for (int c = 0; c < 4; ++c) out.component(c)(l) = 0.0;
  return out;
}

int smallest_error_class(std::span<const double> errors) {
  if (errors.empty()) throw ConfigError("smallest_error_class: no errors given");
  int best = 1;
  for (size_t k = 1; k < errors.size(); ++k)
    if (errors[k] < errors[best - 1]) best = static_cast<int>(k) + 1;
  return best;
}

namespace {

// A(x) - A(delta_k(x)) for every class, via one shared reconstruction.
std::vector<QuaternionMatrix> class_residuals(const LabeledDictionary& dict,
                                              const QuaternionVector& x) {
  const QuaternionMatrix ax = combine(dict.images, x);
  std::vector<QuaternionMatrix> out;
  out.reserve(dict.num_classes);
  for (int k = 1; k <= dict.num_classes; ++k) {
    const QuaternionVector xk = restrict_coeffs(x, k, dict.labels);
    out.push_back(ax - combine(dict.images, xk));
  }
  return out;
}

double weighted_spectral_sum(const Eigen::VectorXd& spectrum,
                             const Eigen::VectorXd& weights) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i)
    sum += weights(std::min<Eigen::Index>(i, weights.size() - 1)) * spectrum(i);
  return sum;
}

}  // namespace

std::vector<double> per_class_errors_nuclear(const LabeledDictionary& dict,
                                             const QuaternionVector& x) {
  std::vector<double> errors;
  errors.reserve(dict.num_classes);
  for (const auto& residual : class_residuals(dict, x))
    errors.push_back(nuclear_norm(residual));
  return errors;
}

std::vector<double> per_class_errors_weighted(const LabeledDictionary& dict,
                                              const QuaternionVector& x,
                                              const Eigen::VectorXd& weights) {
  if (weights.size() == 0)
    throw ConfigError("per_class_errors_weighted: empty weight vector");
  std::vector<double> errors;
  errors.reserve(dict.num_classes);
  for (const auto& residual : class_residuals(dict, x))
    errors.push_back(
        weighted_spectral_sum(quaternion_singular_values(residual), weights));
  return errors;
}

ClassificationResult classify_nqmr(const LabeledDictionary& dict,
                                   const RidgeSystem& ridge,
                                   const QuaternionMatrix& b,
                                   const NqmrConfig& cfg) {
  dict.validate();
  NqmrResult sol = solve_nqmr(dict.images, ridge, b, cfg);
  ClassificationResult res;
  res.per_class_error = per_class_errors_nuclear(dict, sol.x);
  res.predicted = smallest_error_class(res.per_class_error);
  res.coefficients = std::move(sol.x);
  res.dual_trace = std::move(sol.dual_trace);
  res.iterations = sol.iterations;
  res.converged = sol.converged;
  return res;
}

ClassificationResult classify_nqmr(const LabeledDictionary& dict,
                                   const QuaternionMatrix& b,
                                   const NqmrConfig& cfg) {
  const RidgeSystem ridge = build_ridge(dict.images, cfg.lambda / cfg.mu);
  return classify_nqmr(dict, ridge, b, cfg);
}

ClassificationResult classify_rnqmr(const LabeledDictionary& dict,
                                    const RidgeSystem& ridge,
                                    const QuaternionMatrix& b,
                                    const RnqmrConfig& cfg, FinalWeights mode) {
  dict.validate();
  RnqmrResult sol = solve_rnqmr(dict.images, ridge, b, cfg);
  const Eigen::VectorXd gamma =
      mode == FinalWeights::kLastIteration
          ? sol.weights
          : e0_weights(sol.final_e0_spectrum, cfg.omega, cfg.mu, cfg.epsilon_log);
  ClassificationResult res;
  res.per_class_error = per_class_errors_weighted(dict, sol.x, gamma);
  res.predicted = smallest_error_class(res.per_class_error);
  res.coefficients = std::move(sol.x);
  res.dual_trace = std::move(sol.dual_trace);
  res.iterations = sol.iterations;
  res.converged = sol.converged;
  return res;
}

ClassificationResult classify_rnqmr(const LabeledDictionary& dict,
                                    const QuaternionMatrix& b,
                                    const RnqmrConfig& cfg, FinalWeights mode) {
  const RidgeSystem ridge = build_ridge(dict.images, cfg.eta / cfg.mu);
  return classify_rnqmr(dict, ridge, b, cfg, mode);
}

}  // namespace qmreg
