// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qmreg/regression.hpp"

namespace qmreg {

struct RnqmrConfig {
  double omega = 1.0;  // log-nuclear surrogate weight on E0
  double alpha = 1.0;  // L1 weight on the sparse term E1
  double beta = 1.0;   // Frobenius weight on the Gaussian term E2
  double eta = 1.0;    // coefficient ridge weight
  double mu = 1.0;     // penalty, held fixed
  // Offset inside log(sigma + epsilon). At the all-zero start the uniform
  // threshold is (omega/mu)/epsilon_log, so values near 0 wipe E0 out on the
  // first step.
  double epsilon_log = 1e-2;
  double eps_rel = 1e-4;
  int max_iter = 100;
};

/// One ADMM iterate. `ax` caches the current reconstruction A(x); the E
/// updates read it instead of re-applying the dictionary.
struct RnqmrState {
  QuaternionVector x;
  QuaternionMatrix ax, e0, e1, e2, lambda;
  Eigen::VectorXd weights;  // Gamma of the step that produced e0
  double dual = 0.0;        // ||A(x) + E0 + E1 + E2 - B||_F
};

struct RnqmrResult {
  QuaternionVector x;
  Eigen::VectorXd weights;            // Gamma from the last completed iteration
  Eigen::VectorXd final_e0_spectrum;  // quaternion singular values of final E0
  QuaternionMatrix e0, e1, e2;        // final error decomposition
  std::vector<double> dual_trace;
  int iterations = 0;
  bool converged = false;
};

/// Adaptive weights (omega/mu) / (sigma_i + epsilon) for a previous-iterate
/// spectrum.
Eigen::VectorXd e0_weights(const Eigen::VectorXd& spectrum, double omega,
                           double mu, double epsilon_log);

/// Weighted spectral shrinkage of a quaternion matrix: each quaternion
/// singular value (a quadruple of the embedded spectrum) is thresholded by
/// its own weight. Optionally reports the thresholded quaternion spectrum.
QuaternionMatrix weighted_svt_quaternion(const QuaternionMatrix& m,
                                         const Eigen::VectorXd& weights,
                                         Eigen::VectorXd* spectrum = nullptr);

/// Ridge step against vec(B - E0 - E1 - E2 - Lambda/mu). The system must be
/// built with regularizer eta/mu.
QuaternionVector update_x(const RnqmrState& state, const RidgeSystem& ridge,
                          const QuaternionMatrix& b, double mu);

/// Weighted-SVT step for the low-rank error term. Weights come from the
/// spectrum of the previous iterate state.e0; state.ax must already hold the
/// fresh reconstruction. Returns the new E0 and the weights used.
std::pair<QuaternionMatrix, Eigen::VectorXd> update_e0(const RnqmrState& state,
                                                       const QuaternionMatrix& b,
                                                       const RnqmrConfig& cfg);

/// Per-pixel modulus shrinkage at alpha/mu for the sparse error term; expects
/// state.e0 already advanced.
QuaternionMatrix update_e1(const RnqmrState& state, const QuaternionMatrix& b,
                           const RnqmrConfig& cfg);

/// Closed-form Gaussian step mu/(beta+mu) * target; expects state.e0 and
/// state.e1 already advanced.
QuaternionMatrix update_e2(const RnqmrState& state, const QuaternionMatrix& b,
                           const RnqmrConfig& cfg);

/// ADMM for  min omega*sum_i log(sigma_i(E0)+eps) + alpha ||E1||_L1
///               + beta ||E2||_F^2 + eta ||x||_2^2
///           s.t. A(x) + E0 + E1 + E2 = B
/// with the log term handled by iteratively reweighted spectral shrinkage.
RnqmrResult solve_rnqmr(std::span<const QuaternionMatrix> dictionary,
                        const RidgeSystem& ridge, const QuaternionMatrix& b,
                        const RnqmrConfig& cfg);

RnqmrResult solve_rnqmr(std::span<const QuaternionMatrix> dictionary,
                        const QuaternionMatrix& b, const RnqmrConfig& cfg);

}  // namespace qmreg
