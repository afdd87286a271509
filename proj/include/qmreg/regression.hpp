// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#pragma once

#include <span>

#include "qmreg/linalg.hpp"
#include "qmreg/quat_matrix.hpp"

namespace qmreg {

/// Columns are the vectorized dictionary images: an MN x L quaternion matrix.
QuaternionMatrix stack_vectorized(std::span<const QuaternionMatrix> images);

/// Linear combination sum_l A_l * x_l of the dictionary images. Coefficients
/// multiply on the right of each image entry, so that
/// embed_vector(vectorize(combine(A, x))) equals the embedded dictionary
/// matrix applied to embed_vector(x) -- the algebra both solvers optimize in.
QuaternionMatrix combine(std::span<const QuaternionMatrix> images,
                         const QuaternionVector& x);

/// Ridge system over the embedded dictionary (design matrix 4MN x 4L).
RidgeSystem build_ridge(std::span<const QuaternionMatrix> images, double reg);

}  // namespace qmreg
