// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include "qmreg/quat_matrix.hpp"

namespace qmreg {

namespace {

void require_same_shape(const QuaternionMatrix& a, const QuaternionMatrix& b) {
  if (!a.same_shape(b))
    throw ShapeMismatch("quaternion matrices have different shapes");
}

}  // namespace

QuaternionMatrix& QuaternionMatrix::operator+=(const QuaternionMatrix& rhs) {
  require_same_shape(*this, rhs);
  for (int k = 0; k < 4; ++k) c_[k] += rhs.c_[k];
  return *this;
}

QuaternionMatrix& QuaternionMatrix::operator-=(const QuaternionMatrix& rhs) {
  require_same_shape(*this, rhs);
  for (int k = 0; k < 4; ++k) c_[k] -= rhs.c_[k];
  return *this;
}

QuaternionMatrix& QuaternionMatrix::operator*=(double s) {
  for (int k = 0; k < 4; ++k) c_[k] *= s;
  return *this;
}

QuaternionMatrix operator+(const QuaternionMatrix& a, const QuaternionMatrix& b) {
  QuaternionMatrix out = a;
  out += b;
  return out;
}

QuaternionMatrix operator-(const QuaternionMatrix& a, const QuaternionMatrix& b) {
  QuaternionMatrix out = a;
  out -= b;
  return out;
}

QuaternionMatrix operator*(double s, const QuaternionMatrix& a) {
  QuaternionMatrix out = a;
  out *= s;
  return out;
}

QuaternionMatrix operator*(const QuaternionMatrix& a, double s) { return s * a; }

QuaternionMatrix right_scaled(const QuaternionMatrix& a, const Quaternion& s) {
  QuaternionMatrix out(a.rows(), a.cols());
  const auto& a0 = a.component(0);
  const auto& a1 = a.component(1);
  const auto& a2 = a.component(2);
  const auto& a3 = a.component(3);
  out.component(0) = a0 * s.w - a1 * s.x - a2 * s.y - a3 * s.z;
  out.component(1) = a0 * s.x + a1 * s.w + a2 * s.z - a3 * s.y;
  out.component(2) = a0 * s.y - a1 * s.z + a2 * s.w + a3 * s.x;
  out.component(3) = a0 * s.z + a1 * s.y - a2 * s.x + a3 * s.w;
  return out;
}

QuaternionMatrix left_scaled(const Quaternion& s, const QuaternionMatrix& a) {
  QuaternionMatrix out(a.rows(), a.cols());
  const auto& a0 = a.component(0);
  const auto& a1 = a.component(1);
  const auto& a2 = a.component(2);
  const auto& a3 = a.component(3);
  out.component(0) = s.w * a0 - s.x * a1 - s.y * a2 - s.z * a3;
  out.component(1) = s.w * a1 + s.x * a0 + s.y * a3 - s.z * a2;
  out.component(2) = s.w * a2 - s.x * a3 + s.y * a0 + s.z * a1;
  out.component(3) = s.w * a3 + s.x * a2 - s.y * a1 + s.z * a0;
  return out;
}

// The component expansion of the Hamilton product carries over to matrix
// products entry-by-entry, left factor entries on the left.
QuaternionMatrix matmul(const QuaternionMatrix& a, const QuaternionMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeMismatch("matmul: inner dimensions differ");
  QuaternionMatrix out(a.rows(), b.cols());
  const auto& a0 = a.component(0);
  const auto& a1 = a.component(1);
  const auto& a2 = a.component(2);
  const auto& a3 = a.component(3);
  const auto& b0 = b.component(0);
  const auto& b1 = b.component(1);
  const auto& b2 = b.component(2);
  const auto& b3 = b.component(3);
  out.component(0) = a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3;
  out.component(1) = a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2;
  out.component(2) = a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1;
  out.component(3) = a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0;
  return out;
}

QuaternionVector matvec(const QuaternionMatrix& a, const QuaternionVector& p) {
  if (a.cols() != p.size()) throw ShapeMismatch("matvec: inner dimensions differ");
  QuaternionVector out(a.rows());
  const auto& a0 = a.component(0);
  const auto& a1 = a.component(1);
  const auto& a2 = a.component(2);
  const auto& a3 = a.component(3);
  const auto& p0 = p.component(0);
  const auto& p1 = p.component(1);
  const auto& p2 = p.component(2);
  const auto& p3 = p.component(3);
  out.component(0) = a0 * p0 - a1 * p1 - a2 * p2 - a3 * p3;
  out.component(1) = a0 * p1 + a1 * p0 + a2 * p3 - a3 * p2;
  out.component(2) = a0 * p2 - a1 * p3 + a2 * p0 + a3 * p1;
  out.component(3) = a0 * p3 + a1 * p2 - a2 * p1 + a3 * p0;
  return out;
}

QuaternionMatrix conj_transpose(const QuaternionMatrix& a) {
  QuaternionMatrix out(a.cols(), a.rows());
  out.component(0) = a.component(0).transpose();
  out.component(1) = -a.component(1).transpose();
  out.component(2) = -a.component(2).transpose();
  out.component(3) = -a.component(3).transpose();
  return out;
}

QuaternionVector vectorize(const QuaternionMatrix& a) {
  QuaternionVector out(a.size());
  for (int k = 0; k < 4; ++k)
    out.component(k) =
        Eigen::Map<const Eigen::VectorXd>(a.component(k).data(), a.size());
  return out;
}

QuaternionMatrix unvectorize(const QuaternionVector& v, Eigen::Index rows,
                             Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw ShapeMismatch("unvectorize: size does not factor into rows*cols");
  QuaternionMatrix out(rows, cols);
  for (int k = 0; k < 4; ++k)
    out.component(k) =
        Eigen::Map<const Eigen::MatrixXd>(v.component(k).data(), rows, cols);
  return out;
}

}  // namespace qmreg
