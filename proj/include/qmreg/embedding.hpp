// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#pragma once

#include <Eigen/Dense>

#include "qmreg/quat_matrix.hpp"

namespace qmreg {

/// The real embedding of an M x N quaternion matrix: a 4M x 4N real matrix
/// with the block sign pattern
///
///     [ Q0 -Q1 -Q2 -Q3 ]
///     [ Q1  Q0 -Q3  Q2 ]
///     [ Q2  Q3  Q0 -Q1 ]
///     [ Q3 -Q2  Q1  Q0 ]
///
/// It is the matrix of left multiplication by Q acting on stacked component
/// coordinates: embed_vector(Q*p) == embed_matrix(Q) * embed_vector(p).
using RealEmbedding = Eigen::MatrixXd;

RealEmbedding embed_matrix(const QuaternionMatrix& q);

/// Structure-preserving inverse: each component is recovered as the average
/// of its four (signed) occurrences, so inputs that drift off the embedded
/// subspace are projected back symmetrically. Exact inverse on embed_matrix
/// outputs.
QuaternionMatrix unembed_matrix(const RealEmbedding& r);

/// Stacks the four component vectors: (q0^T, q1^T, q2^T, q3^T)^T.
Eigen::VectorXd embed_vector(const QuaternionVector& q);
QuaternionVector unembed_vector(const Eigen::VectorXd& v);

/// Reshapes a quaternion matrix into a 4 x MN real matrix whose column j is
/// the component 4-vector of pixel j (column-major order). Column norms are
/// entry moduli, so the matrix L1 norm of Q equals the L2,1 norm of the
/// stack.
Eigen::MatrixXd channel_stack(const QuaternionMatrix& q);
QuaternionMatrix channel_unstack(const Eigen::MatrixXd& s, Eigen::Index rows,
                                 Eigen::Index cols);

/// Sum of the quaternion singular values, computed as one quarter of the
/// nuclear norm of the real embedding (whose spectrum repeats each quaternion
/// singular value four times). Note the Frobenius norms relate by a factor of
/// 2, not 4: each component appears in four blocks, so
/// ||embed_matrix(Q)||_F^2 = 4 * ||Q||_F^2.
double nuclear_norm(const QuaternionMatrix& q);

}  // namespace qmreg
