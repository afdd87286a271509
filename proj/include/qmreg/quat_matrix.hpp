// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#pragma once

#include <array>
#include <span>

#include <Eigen/Dense>

#include "qmreg/errors.hpp"
#include "qmreg/quaternion.hpp"

namespace qmreg {

/// Quaternion vector stored as four real component planes (w, x, y, z).
class QuaternionVector {
 public:
  QuaternionVector() : QuaternionVector(0) {}

  explicit QuaternionVector(Eigen::Index n) {
    for (auto& plane : c_) plane = Eigen::VectorXd::Zero(n);
  }

  static QuaternionVector zero(Eigen::Index n) { return QuaternionVector(n); }

  Eigen::Index size() const { return c_[0].size(); }

  Quaternion get(Eigen::Index i) const {
    return {c_[0](i), c_[1](i), c_[2](i), c_[3](i)};
  }

  void set(Eigen::Index i, const Quaternion& q) {
    c_[0](i) = q.w;
    c_[1](i) = q.x;
    c_[2](i) = q.y;
    c_[3](i) = q.z;
  }

  Eigen::VectorXd& component(int k) { return c_[k]; }
  const Eigen::VectorXd& component(int k) const { return c_[k]; }

  /// sqrt of the sum of squared entry moduli.
  double l2_norm() const {
    double s = 0.0;
    for (const auto& plane : c_) s += plane.squaredNorm();
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (const auto& plane : c_)
      if (!plane.allFinite()) return false;
    return true;
  }

 private:
  std::array<Eigen::VectorXd, 4> c_;
};

/// Dense M x N quaternion matrix stored as four real component planes
/// (column-major, so vec() of a component is a straight memory view).
/// A color image is the pure case: w plane identically zero, x/y/z = R/G/B.
class QuaternionMatrix {
 public:
  QuaternionMatrix() : QuaternionMatrix(0, 0) {}

  QuaternionMatrix(Eigen::Index rows, Eigen::Index cols) {
    for (auto& plane : c_) plane = Eigen::MatrixXd::Zero(rows, cols);
  }

  static QuaternionMatrix zero(Eigen::Index rows, Eigen::Index cols) {
    return {rows, cols};
  }

  Eigen::Index rows() const { return c_[0].rows(); }
  Eigen::Index cols() const { return c_[0].cols(); }
  Eigen::Index size() const { return c_[0].size(); }

  Quaternion get(Eigen::Index i, Eigen::Index j) const {
    return {c_[0](i, j), c_[1](i, j), c_[2](i, j), c_[3](i, j)};
  }

  void set(Eigen::Index i, Eigen::Index j, const Quaternion& q) {
    c_[0](i, j) = q.w;
    c_[1](i, j) = q.x;
    c_[2](i, j) = q.y;
    c_[3](i, j) = q.z;
  }

  Eigen::MatrixXd& component(int k) { return c_[k]; }
  const Eigen::MatrixXd& component(int k) const { return c_[k]; }

  bool same_shape(const QuaternionMatrix& other) const {
    return rows() == other.rows() && cols() == other.cols();
  }

  /// True iff every entry has zero real part (image matrices).
  bool is_pure() const { return (c_[0].array() == 0.0).all(); }

  bool all_finite() const {
    for (const auto& plane : c_)
      if (!plane.allFinite()) return false;
    return true;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& plane : c_) s += plane.squaredNorm();
    return std::sqrt(s);
  }

  /// Sum of entry moduli.
  double l1_norm() const {
    return (c_[0].array().square() + c_[1].array().square() +
            c_[2].array().square() + c_[3].array().square())
        .sqrt()
        .sum();
  }

  /// Entrywise modulus as a real matrix.
  Eigen::MatrixXd modulus() const {
    return (c_[0].array().square() + c_[1].array().square() +
            c_[2].array().square() + c_[3].array().square())
        .sqrt()
        .matrix();
  }

  QuaternionMatrix& operator+=(const QuaternionMatrix& rhs);
  QuaternionMatrix& operator-=(const QuaternionMatrix& rhs);
  QuaternionMatrix& operator*=(double s);

 private:
  std::array<Eigen::MatrixXd, 4> c_;
};

QuaternionMatrix operator+(const QuaternionMatrix& a, const QuaternionMatrix& b);
QuaternionMatrix operator-(const QuaternionMatrix& a, const QuaternionMatrix& b);
QuaternionMatrix operator*(double s, const QuaternionMatrix& a);
QuaternionMatrix operator*(const QuaternionMatrix& a, double s);

/// A * s with the quaternion scalar on the right of every entry.
QuaternionMatrix right_scaled(const QuaternionMatrix& a, const Quaternion& s);

/// s * A with the quaternion scalar on the left of every entry.
QuaternionMatrix left_scaled(const Quaternion& s, const QuaternionMatrix& a);

/// Quaternion matrix product (entries of `a` multiply from the left).
QuaternionMatrix matmul(const QuaternionMatrix& a, const QuaternionMatrix& b);

/// Quaternion matrix-vector product.
QuaternionVector matvec(const QuaternionMatrix& a, const QuaternionVector& p);

/// Conjugate transpose Q^H.
QuaternionMatrix conj_transpose(const QuaternionMatrix& a);

/// Column-major vectorization; inverse reshape.
QuaternionVector vectorize(const QuaternionMatrix& a);
QuaternionMatrix unvectorize(const QuaternionVector& v, Eigen::Index rows,
                             Eigen::Index cols);

}  // namespace qmreg
