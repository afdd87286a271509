// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include "qmreg/nqmr.hpp"

#include <cmath>

namespace qmreg {

namespace {

void validate(std::span<const QuaternionMatrix> dictionary,
              const RidgeSystem& ridge, const QuaternionMatrix& b,
              const NqmrConfig& cfg) {
  if (cfg.lambda <= 0.0 || cfg.mu <= 0.0 || cfg.eps_rel <= 0.0 || cfg.max_iter < 1)
    throw ConfigError("NqmrConfig: lambda, mu, eps_rel must be positive and max_iter >= 1");
  if (dictionary.empty()) throw ShapeMismatch("solve_nqmr: empty dictionary");
  for (const auto& img : dictionary)
    if (!img.same_shape(b))
      throw ShapeMismatch("solve_nqmr: dictionary/query shapes differ");
  if (ridge.unknowns() != 4 * static_cast<Eigen::Index>(dictionary.size()) ||
      ridge.design().rows() != 4 * b.size())
    throw ShapeMismatch("solve_nqmr: ridge system does not match dictionary");
}

}  // namespace

NqmrResult solve_nqmr(std::span<const QuaternionMatrix> dictionary,
                      const RidgeSystem& ridge, const QuaternionMatrix& b,
                      const NqmrConfig& cfg) {
  validate(dictionary, ridge, b, cfg);
  const double mu = cfg.mu;
  QuaternionMatrix e(b.rows(), b.cols());       // E^0 = 0
  QuaternionMatrix lambda(b.rows(), b.cols());  // multiplier, 0

  NqmrResult res;
  double prev_dual = 0.0;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    // Coefficient step: ridge fit against vec(B + E - Lambda/mu).
    const QuaternionMatrix g = b + e - (1.0 / mu) * lambda;
    res.x = unembed_vector(ridge.solve(embed_vector(vectorize(g))));

    const QuaternionMatrix ax = combine(dictionary, res.x);

    // Error step: spectral soft threshold at 1/mu through the embedding.
    const QuaternionMatrix target = ax - b + (1.0 / mu) * lambda;
    e = unembed_matrix(svt(embed_matrix(target), 1.0 / mu));

    const QuaternionMatrix residual = ax - b - e;
    lambda += mu * residual;

    const double dual = residual.frobenius_norm();
    if (!std::isfinite(dual) || !res.x.all_finite())
      throw NonFinite("solve_nqmr: iterate is not finite");
    res.dual_trace.push_back(dual);
    res.iterations = iter;
    if (iter >= 2 && std::abs(prev_dual - dual) < cfg.eps_rel) {
      res.converged = true;
      break;
    }
    prev_dual = dual;
  }
  return res;
}

NqmrResult solve_nqmr(std::span<const QuaternionMatrix> dictionary,
                      const QuaternionMatrix& b, const NqmrConfig& cfg) {
  if (cfg.lambda <= 0.0 || cfg.mu <= 0.0)
    throw ConfigError("NqmrConfig: lambda and mu must be positive");
  const RidgeSystem ridge = build_ridge(dictionary, cfg.lambda / cfg.mu);
  return solve_nqmr(dictionary, ridge, b, cfg);
}

}  // namespace qmreg
