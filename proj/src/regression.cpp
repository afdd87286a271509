// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include "qmreg/regression.hpp"

namespace qmreg {

namespace {

void require_uniform_shape(std::span<const QuaternionMatrix> images) {
  if (images.empty()) throw ShapeMismatch("dictionary is empty");
  for (const auto& img : images)
    if (!img.same_shape(images[0]))
      throw ShapeMismatch("dictionary images have different shapes");
}

}  // namespace

QuaternionMatrix stack_vectorized(std::span<const QuaternionMatrix> images) {
  require_uniform_shape(images);
  const Eigen::Index mn = images[0].size();
  QuaternionMatrix h(mn, static_cast<Eigen::Index>(images.size()));
  for (Eigen::Index l = 0; l < h.cols(); ++l)
    for (int k = 0; k < 4; ++k)
      h.component(k).col(l) =
          Eigen::Map<const Eigen::VectorXd>(images[l].component(k).data(), mn);
  return h;
}

QuaternionMatrix combine(std::span<const QuaternionMatrix> images,
                         const QuaternionVector& x) {
  require_uniform_shape(images);
  if (static_cast<Eigen::Index>(images.size()) != x.size())
    throw ShapeMismatch("combine: coefficient count differs from dictionary size");
  QuaternionMatrix out(images[0].rows(), images[0].cols());
  for (Eigen::Index l = 0; l < x.size(); ++l)
    out += right_scaled(images[l], x.get(l));
  return out;
}

RidgeSystem build_ridge(std::span<const QuaternionMatrix> images, double reg) {
  return RidgeSystem(embed_matrix(stack_vectorized(images)), reg);
}

}  // namespace qmreg
