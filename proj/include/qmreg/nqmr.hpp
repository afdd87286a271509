// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#pragma once

#include <span>
#include <vector>

#include "qmreg/regression.hpp"

namespace qmreg {

struct NqmrConfig {
  double lambda = 1.0;  // coefficient ridge weight
  double mu = 1.0;      // augmented Lagrangian penalty (held fixed)
  double eps_rel = 1e-4;
  int max_iter = 100;
};

struct NqmrResult {
  QuaternionVector x;
  std::vector<double> dual_trace;  // ||A(x) - B - E||_F per iteration
  int iterations = 0;
  bool converged = false;  // stopped by the dual rule rather than max_iter
};

/// ADMM for  min ||E||_* + lambda/2 ||x||_2^2  s.t.  A(x) - B = E.
/// Alternates a ridge step on the coefficients, singular value thresholding
/// on the embedded error image, and a multiplier ascent step; stops when the
/// dual residual stabilizes to eps_rel.
NqmrResult solve_nqmr(std::span<const QuaternionMatrix> dictionary,
                      const RidgeSystem& ridge, const QuaternionMatrix& b,
                      const NqmrConfig& cfg);

/// Convenience overload that builds the ridge system (regularizer lambda/mu)
/// internally. Prefer the other overload when running many queries against
/// one dictionary.
NqmrResult solve_nqmr(std::span<const QuaternionMatrix> dictionary,
                      const QuaternionMatrix& b, const NqmrConfig& cfg);

}  // namespace qmreg
