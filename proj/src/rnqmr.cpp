// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include "qmreg/rnqmr.hpp"

#include <cmath>

namespace qmreg {

namespace {

void validate(std::span<const QuaternionMatrix> dictionary,
              const RidgeSystem& ridge, const QuaternionMatrix& b,
              const RnqmrConfig& cfg) {
  if (cfg.omega <= 0.0 || cfg.alpha <= 0.0 || cfg.beta <= 0.0 ||
      cfg.eta <= 0.0 || cfg.mu <= 0.0 || cfg.epsilon_log <= 0.0 ||
      cfg.eps_rel <= 0.0 || cfg.max_iter < 1)
    throw ConfigError("RnqmrConfig: all parameters must be positive");
  if (dictionary.empty()) throw ShapeMismatch("solve_rnqmr: empty dictionary");
  for (const auto& img : dictionary)
    if (!img.same_shape(b))
      throw ShapeMismatch("solve_rnqmr: dictionary/query shapes differ");
  if (ridge.unknowns() != 4 * static_cast<Eigen::Index>(dictionary.size()) ||
      ridge.design().rows() != 4 * b.size())
    throw ShapeMismatch("solve_rnqmr: ridge system does not match dictionary");
}

QuaternionMatrix e0_target(const RnqmrState& s, const QuaternionMatrix& b,
                           double mu) {
  return b - s.ax - s.e1 - s.e2 - (1.0 / mu) * s.lambda;
}

}  // namespace

Eigen::VectorXd e0_weights(const Eigen::VectorXd& spectrum, double omega,
                           double mu, double epsilon_log) {
  return (omega / mu) / (spectrum.array() + epsilon_log);
}

QuaternionMatrix weighted_svt_quaternion(const QuaternionMatrix& m,
                                         const Eigen::VectorXd& weights,
                                         Eigen::VectorXd* spectrum) {
  // Each embedded quadruple shares one weight, so the shrinkage stays on the
  // embedded subspace and inverts exactly.
  Eigen::VectorXd expanded(4 * weights.size());
  for (Eigen::Index g = 0; g < weights.size(); ++g)
    expanded.segment(4 * g, 4).setConstant(weights(g));
  Eigen::VectorXd thresholded;
  const Eigen::MatrixXd shrunk = weighted_svt(embed_matrix(m), expanded, &thresholded);
  if (spectrum) *spectrum = quadruple_representatives(thresholded);
  return unembed_matrix(shrunk);
}

QuaternionVector update_x(const RnqmrState& state, const RidgeSystem& ridge,
                          const QuaternionMatrix& b, double mu) {
  const QuaternionMatrix y =
      b - state.e0 - state.e1 - state.e2 - (1.0 / mu) * state.lambda;
  return unembed_vector(ridge.solve(embed_vector(vectorize(y))));
}

std::pair<QuaternionMatrix, Eigen::VectorXd> update_e0(const RnqmrState& state,
                                                       const QuaternionMatrix& b,
                                                       const RnqmrConfig& cfg) {
  const Eigen::VectorXd prev_spectrum = quaternion_singular_values(state.e0);
  const Eigen::VectorXd w =
      e0_weights(prev_spectrum, cfg.omega, cfg.mu, cfg.epsilon_log);
  QuaternionMatrix e0 =
      weighted_svt_quaternion(e0_target(state, b, cfg.mu), w, nullptr);
  return {std::move(e0), w};
}

QuaternionMatrix update_e1(const RnqmrState& state, const QuaternionMatrix& b,
                           const RnqmrConfig& cfg) {
  const QuaternionMatrix target =
      b - state.ax - state.e0 - state.e2 - (1.0 / cfg.mu) * state.lambda;
  return channel_unstack(l21_shrink(channel_stack(target), cfg.alpha / cfg.mu),
                         b.rows(), b.cols());
}

QuaternionMatrix update_e2(const RnqmrState& state, const QuaternionMatrix& b,
                           const RnqmrConfig& cfg) {
  const QuaternionMatrix target =
      b - state.ax - state.e0 - state.e1 - (1.0 / cfg.mu) * state.lambda;
  return (cfg.mu / (cfg.beta + cfg.mu)) * target;
}

RnqmrResult solve_rnqmr(std::span<const QuaternionMatrix> dictionary,
                        const RidgeSystem& ridge, const QuaternionMatrix& b,
                        const RnqmrConfig& cfg) {
  validate(dictionary, ridge, b, cfg);
  const double mu = cfg.mu;

  RnqmrState s;
  s.ax = QuaternionMatrix(b.rows(), b.cols());
  s.e0 = QuaternionMatrix(b.rows(), b.cols());
  s.e1 = QuaternionMatrix(b.rows(), b.cols());
  s.e2 = QuaternionMatrix(b.rows(), b.cols());
  s.lambda = QuaternionMatrix(b.rows(), b.cols());

  // Spectrum of the previous E0, carried across iterations to avoid a second
  // SVD per step. All-zero start matches an all-zero spectrum.
  Eigen::VectorXd e0_spectrum =
      Eigen::VectorXd::Zero(std::min(b.rows(), b.cols()));

  RnqmrResult res;
  double prev_dual = 0.0;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    // Step order follows the derivation: x, E0, E1, E2, multiplier.
    s.x = update_x(s, ridge, b, mu);
    s.ax = combine(dictionary, s.x);

    s.weights = e0_weights(e0_spectrum, cfg.omega, mu, cfg.epsilon_log);
    s.e0 = weighted_svt_quaternion(e0_target(s, b, mu), s.weights, &e0_spectrum);

    s.e1 = update_e1(s, b, cfg);
    s.e2 = update_e2(s, b, cfg);

    const QuaternionMatrix residual = s.ax + s.e0 + s.e1 + s.e2 - b;
    s.lambda += mu * residual;

    s.dual = residual.frobenius_norm();
    if (!std::isfinite(s.dual) || !s.x.all_finite())
      throw NonFinite("solve_rnqmr: iterate is not finite");
    res.dual_trace.push_back(s.dual);
    res.iterations = iter;
    if (iter >= 2 && std::abs(prev_dual - s.dual) < cfg.eps_rel) {
      res.converged = true;
      break;
    }
    prev_dual = s.dual;
  }

  res.x = std::move(s.x);
  res.weights = std::move(s.weights);
  res.final_e0_spectrum = std::move(e0_spectrum);
  res.e0 = std::move(s.e0);
  res.e1 = std::move(s.e1);
  res.e2 = std::move(s.e2);
  return res;
}

RnqmrResult solve_rnqmr(std::span<const QuaternionMatrix> dictionary,
                        const QuaternionMatrix& b, const RnqmrConfig& cfg) {
  if (cfg.eta <= 0.0 || cfg.mu <= 0.0)
    throw ConfigError("RnqmrConfig: eta and mu must be positive");
  const RidgeSystem ridge = build_ridge(dictionary, cfg.eta / cfg.mu);
  return solve_rnqmr(dictionary, ridge, b, cfg);
}

}  // namespace qmreg
