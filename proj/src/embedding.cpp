// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include "qmreg/embedding.hpp"

#include <Eigen/SVD>

namespace qmreg {

namespace {

// Component index and sign of block (r, c) of the embedding.
constexpr int kBlockComponent[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
};
constexpr double kBlockSign[4][4] = {
    {+1.0, -1.0, -1.0, -1.0},
    {+1.0, +1.0, -1.0, +1.0},
    {+1.0, +1.0, +1.0, -1.0},
    {+1.0, -1.0, +1.0, +1.0},
};

}  // namespace

RealEmbedding embed_matrix(const QuaternionMatrix& q) {
  const Eigen::Index m = q.rows();
  const Eigen::Index n = q.cols();
  RealEmbedding out(4 * m, 4 * n);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      out.block(r * m, c * n, m, n) =
          kBlockSign[r][c] * q.component(kBlockComponent[r][c]);
  return out;
}

QuaternionMatrix unembed_matrix(const RealEmbedding& r) {
  if (r.rows() % 4 != 0 || r.cols() % 4 != 0)
    throw ShapeMismatch("unembed_matrix: dimensions must be multiples of 4");
  const Eigen::Index m = r.rows() / 4;
  const Eigen::Index n = r.cols() / 4;
  QuaternionMatrix out(m, n);
  for (int br = 0; br < 4; ++br)
    for (int bc = 0; bc < 4; ++bc)
      out.component(kBlockComponent[br][bc]) +=
          0.25 * kBlockSign[br][bc] * r.block(br * m, bc * n, m, n);
  return out;
}

Eigen::VectorXd embed_vector(const QuaternionVector& q) {
  const Eigen::Index n = q.size();
  Eigen::VectorXd out(4 * n);
  for (int k = 0; k < 4; ++k) out.segment(k * n, n) = q.component(k);
  return out;
}

QuaternionVector unembed_vector(const Eigen::VectorXd& v) {
  if (v.size() % 4 != 0)
    throw ShapeMismatch("unembed_vector: length must be a multiple of 4");
  const Eigen::Index n = v.size() / 4;
  QuaternionVector out(n);
  for (int k = 0; k < 4; ++k) out.component(k) = v.segment(k * n, n);
  return out;
}

Eigen::MatrixXd channel_stack(const QuaternionMatrix& q) {
  Eigen::MatrixXd out(4, q.size());
  for (int k = 0; k < 4; ++k)
    out.row(k) =
        Eigen::Map<const Eigen::RowVectorXd>(q.component(k).data(), q.size());
  return out;
}

QuaternionMatrix channel_unstack(const Eigen::MatrixXd& s, Eigen::Index rows,
                                 Eigen::Index cols) {
  if (s.rows() != 4 || s.cols() != rows * cols)
    throw ShapeMismatch("channel_unstack: expected a 4 x rows*cols matrix");
  QuaternionMatrix out(rows, cols);
  for (int k = 0; k < 4; ++k) {
    Eigen::RowVectorXd row = s.row(k);
    out.component(k) = Eigen::Map<const Eigen::MatrixXd>(row.data(), rows, cols);
  }
  return out;
}

double nuclear_norm(const QuaternionMatrix& q) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(embed_matrix(q));
  return 0.25 * svd.singularValues().sum();
}

}  // namespace qmreg
