// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#pragma once

#include <span>
#include <vector>

#include "qmreg/nqmr.hpp"
#include "qmreg/rnqmr.hpp"

namespace qmreg {

/// Training images with class labels in 1..num_classes.
struct LabeledDictionary {
  std::vector<QuaternionMatrix> images;
  std::vector<int> labels;
  int num_classes = 0;

  /// Throws ConfigError unless labels are in range and L >= K >= 1.
  void validate() const;
};

struct ClassificationResult {
  int predicted = 0;  // class id in 1..K
  std::vector<double> per_class_error;
  QuaternionVector coefficients;
  std::vector<double> dual_trace;
  int iterations = 0;
  bool converged = false;
};

/// Which weight vector the weighted reconstruction error uses: the weights
/// the solver produced on its last iteration, or weights recomputed from the
/// final E0 spectrum.
enum class FinalWeights { kLastIteration, kRecomputedFromE0 };

/// Copy of x with every coefficient not belonging to class k zeroed.
QuaternionVector restrict_coeffs(const QuaternionVector& x, int k,
                                 std::span<const int> labels);

/// Index (1-based class id) of the smallest error; ties go to the lowest id.
int smallest_error_class(std::span<const double> errors);

/// Per-class nuclear-norm reconstruction errors ||A(x) - A(delta_k(x))||_*.
std::vector<double> per_class_errors_nuclear(const LabeledDictionary& dict,
                                             const QuaternionVector& x);

/// Weighted variant sum_i Gamma_i * sigma_i(A(x) - A(delta_k(x))) on the
/// quaternion spectrum; a short weight vector is padded with its last value.
std::vector<double> per_class_errors_weighted(const LabeledDictionary& dict,
                                              const QuaternionVector& x,
                                              const Eigen::VectorXd& weights);

ClassificationResult classify_nqmr(const LabeledDictionary& dict,
                                   const RidgeSystem& ridge,
                                   const QuaternionMatrix& b,
                                   const NqmrConfig& cfg);

ClassificationResult classify_nqmr(const LabeledDictionary& dict,
                                   const QuaternionMatrix& b,
                                   const NqmrConfig& cfg);

ClassificationResult classify_rnqmr(const LabeledDictionary& dict,
                                    const RidgeSystem& ridge,
                                    const QuaternionMatrix& b,
                                    const RnqmrConfig& cfg,
                                    FinalWeights mode = FinalWeights::kLastIteration);

ClassificationResult classify_rnqmr(const LabeledDictionary& dict,
                                    const QuaternionMatrix& b,
                                    const RnqmrConfig& cfg,
                                    FinalWeights mode = FinalWeights::kLastIteration);

}  // namespace qmreg
