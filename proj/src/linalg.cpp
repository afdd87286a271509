// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include "qmreg/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace qmreg {

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();
}

Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double gamma) {
  if (gamma < 0.0) throw ConfigError("svt: negative threshold");
  if (gamma == 0.0) return m;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd sv = (svd.singularValues().array() - gamma).max(0.0);
  return svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
}

Eigen::MatrixXd weighted_svt(const Eigen::MatrixXd& m, const Eigen::VectorXd& s,
                             Eigen::VectorXd* thresholded_values) {
  if (s.size() == 0) throw ConfigError("weighted_svt: empty weight vector");
  if ((s.array() < 0.0).any()) throw ConfigError("weighted_svt: negative weight");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double w = s(std::min<Eigen::Index>(i, s.size() - 1));
    sv(i) = std::max(sv(i) - w, 0.0);
  }
  if (thresholded_values) *thresholded_values = sv;
  return svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
}

Eigen::MatrixXd l21_shrink(const Eigen::MatrixXd& z, double threshold) {
  if (threshold < 0.0) throw ConfigError("l21_shrink: negative threshold");
  Eigen::MatrixXd out(z.rows(), z.cols());
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const double n = z.col(j).norm();
    if (n > threshold)
      out.col(j) = ((n - threshold) / n) * z.col(j);
    else
      out.col(j).setZero();
  }
  return out;
}

Eigen::VectorXd quadruple_representatives(const Eigen::VectorXd& values,
                                          double rel_tol) {
  if (values.size() % 4 != 0)
    throw ShapeMismatch("quadruple_representatives: length must be a multiple of 4");
  const Eigen::Index groups = values.size() / 4;
  const double scale = std::max(values.size() > 0 ? values(0) : 0.0, 1e-300);
  Eigen::VectorXd out(groups);
  for (Eigen::Index g = 0; g < groups; ++g) {
    const auto quad = values.segment(4 * g, 4);
    const double rep = quad.mean();
    const double spread = (quad.array() - rep).abs().maxCoeff();
    if (spread > rel_tol * scale)
      throw Error("embedded spectrum does not split into equal quadruples");
    out(g) = rep;
  }
  return out;
}

Eigen::VectorXd quaternion_singular_values(const QuaternionMatrix& q,
                                           double rel_tol) {
  return quadruple_representatives(singular_values(embed_matrix(q)), rel_tol);
}

RidgeSystem::RidgeSystem(Eigen::MatrixXd design, double reg)
    : design_(std::move(design)), reg_(reg) {
  if (reg_ < 0.0) throw ConfigError("RidgeSystem: negative regularizer");
  const Eigen::Index n = design_.cols();
  Eigen::MatrixXd normal = design_.transpose() * design_;
  normal.diagonal().array() += reg_;
  llt_.compute(normal);
  if (llt_.info() != Eigen::Success)
    throw FactorizationFailure("RidgeSystem: normal matrix is not positive definite");
}

Eigen::VectorXd RidgeSystem::solve(const Eigen::VectorXd& g) const {
  if (g.size() != design_.rows())
    throw ShapeMismatch("RidgeSystem::solve: right-hand side length mismatch");
  return llt_.solve(design_.transpose() * g);
}

}  // namespace qmreg
