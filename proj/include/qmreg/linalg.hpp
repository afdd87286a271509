// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "qmreg/embedding.hpp"
#include "qmreg/quat_matrix.hpp"

namespace qmreg {

/// Singular values of a dense real matrix, descending.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& m);

/// Singular value thresholding D_gamma: soft-threshold the spectrum by gamma
/// and reconstruct. Proximal operator of gamma * nuclear norm.
Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double gamma);

/// Per-singular-value soft thresholding Psi_s with weight vector s
/// (sigma_i -> max(sigma_i - s_i, 0)). A weight list shorter than the
/// spectrum is padded with its last value. Optionally reports the
/// thresholded spectrum.
Eigen::MatrixXd weighted_svt(const Eigen::MatrixXd& m, const Eigen::VectorXd& s,
                             Eigen::VectorXd* thresholded_values = nullptr);

/// Columnwise L2 shrinkage: column j is scaled by (||z_j|| - t) / ||z_j|| when
/// ||z_j|| > t and zeroed otherwise. Proximal operator of t * L2,1 norm.
Eigen::MatrixXd l21_shrink(const Eigen::MatrixXd& z, double threshold);

/// Collapses a spectrum that repeats every value four times (as embedded
/// quaternion spectra do) to one representative per group of four. Throws if
/// a group disagrees by more than rel_tol relative to the largest value.
Eigen::VectorXd quadruple_representatives(const Eigen::VectorXd& values,
                                          double rel_tol = 1e-6);

/// The quaternion singular values of Q: the embedded spectrum collapsed to
/// quadruple representatives.
Eigen::VectorXd quaternion_singular_values(const QuaternionMatrix& q,
                                           double rel_tol = 1e-6);

/// Ridge-regression system min ||A x - g||_2^2 + reg ||x||_2^2 for a fixed
/// design matrix A. The SPD normal matrix A^T A + reg I is factored once at
/// construction; solves share the cached Cholesky factor and are safe to run
/// concurrently.
class RidgeSystem {
 public:
  RidgeSystem(Eigen::MatrixXd design, double reg);

  /// Minimizer of ||A x - g||_2^2 + reg ||x||_2^2.
  Eigen::VectorXd solve(const Eigen::VectorXd& g) const;

  const Eigen::MatrixXd& design() const { return design_; }
  double regularizer() const { return reg_; }
  Eigen::Index unknowns() const { return design_.cols(); }

 private:
  Eigen::MatrixXd design_;
  double reg_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

}  // namespace qmreg
