// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include <doctest.h>

#include "qmreg/embedding.hpp"
#include "qmreg/linalg.hpp"
#include "qmreg/quat_matrix.hpp"
#include "test_util.hpp"

using namespace qmreg;
using qmreg::testing::TestRng;
using qmreg::testing::max_abs_diff;

namespace {

QuaternionMatrix real_diag(std::initializer_list<double> values) {
  const Eigen::Index n = static_cast<Eigen::Index>(values.size());
  QuaternionMatrix q(n, n);
  Eigen::Index i = 0;
  for (double v : values) q.component(0)(i, i) = v, ++i;
  return q;
}

}  // namespace

TEST_CASE("quaternion product follows the unit relations") {
  const Quaternion i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
  CHECK(i * j == k);
  CHECK(j * i == -k);
  CHECK(j * k == i);
  CHECK(k * j == -i);
  CHECK(k * i == j);
  CHECK(i * k == -j);
  CHECK(i * i == Quaternion{-1, 0, 0, 0});
}

TEST_CASE("quaternion identity and a hand-expanded product") {
  const Quaternion q{1, 2, 3, 4};
  CHECK(q * Quaternion::one() == q);
  CHECK(Quaternion::one() * q == q);
  // (1+i)(1+j) expanded by hand: 1 + j + i + ij = 1 + i + j + k.
  CHECK(Quaternion{1, 1, 0, 0} * Quaternion{1, 0, 1, 0} == Quaternion{1, 1, 1, 1});
}

TEST_CASE("conjugation and modulus") {
  TestRng rng(11);
  for (int t = 0; t < 20; ++t) {
    const Quaternion q = rng.quaternion();
    CHECK(q.conj().conj() == q);
    const Quaternion qq = q * q.conj();
    CHECK(qq.w == doctest::Approx(q.squared_modulus()).epsilon(1e-12));
    CHECK(std::abs(qq.x) < 1e-12);
    CHECK(std::abs(qq.y) < 1e-12);
    CHECK(std::abs(qq.z) < 1e-12);
  }
  CHECK(Quaternion{1, 1, 1, 1}.modulus() == doctest::Approx(2.0));
}

TEST_CASE("embed_matrix reproduces the block sign pattern on a 1x1 matrix") {
  QuaternionMatrix q(1, 1);
  q.set(0, 0, {1, 2, 3, 4});
  const Eigen::MatrixXd r = embed_matrix(q);
  Eigen::MatrixXd expected(4, 4);
  expected << 1, -2, -3, -4,  //
      2, 1, -4, 3,            //
      3, 4, 1, -2,            //
      4, -3, 2, 1;
  CHECK((r - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("embed_matrix of zero and of a real matrix") {
  CHECK(embed_matrix(QuaternionMatrix(3, 2)).cwiseAbs().maxCoeff() == 0.0);

  TestRng rng(5);
  QuaternionMatrix q(3, 3);
  q.component(0) = rng.real_matrix(3, 3);
  const Eigen::MatrixXd r = embed_matrix(q);
  for (int br = 0; br < 4; ++br)
    for (int bc = 0; bc < 4; ++bc) {
      const Eigen::MatrixXd block = r.block(3 * br, 3 * bc, 3, 3);
      if (br == bc)
        CHECK((block - q.component(0)).cwiseAbs().maxCoeff() == 0.0);
      else
        CHECK(block.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("unembed_matrix inverts embed_matrix and averages drift") {
  TestRng rng(7);
  const QuaternionMatrix q = rng.matrix(4, 3);
  CHECK(max_abs_diff(unembed_matrix(embed_matrix(q)), q) < 1e-15);

  // block-diag(A,A,A,A) is the embedding of the real matrix A
  QuaternionMatrix real_q(4, 3);
  real_q.component(0) = rng.real_matrix(4, 3);
  CHECK(max_abs_diff(unembed_matrix(embed_matrix(real_q)), real_q) < 1e-15);

  // Perturbing one block by epsilon moves the averaged component by eps/4:
  // block (1,0) carries +Q1, so Q1 picks up eps/4 and nothing else changes.
  const double eps = 0.32;
  Eigen::MatrixXd r = embed_matrix(q);
  r.block(4, 0, 4, 3).array() += eps;
  const QuaternionMatrix back = unembed_matrix(r);
  CHECK((back.component(1) - (q.component(1).array() + eps / 4).matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK((back.component(0) - q.component(0)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((back.component(2) - q.component(2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((back.component(3) - q.component(3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("embed_vector stacks components and preserves the norm") {
  QuaternionVector q(1);
  q.set(0, {1, 2, 3, 4});
  const Eigen::VectorXd v = embed_vector(q);
  Eigen::VectorXd expected(4);
  expected << 1, 2, 3, 4;
  CHECK((v - expected).cwiseAbs().maxCoeff() == 0.0);

  CHECK(embed_vector(QuaternionVector(5)).cwiseAbs().maxCoeff() == 0.0);

  TestRng rng(13);
  for (int t = 0; t < 50; ++t) {
    const QuaternionVector p = rng.vector(6);
    CHECK(embed_vector(p).norm() == doctest::Approx(p.l2_norm()).epsilon(1e-12));
    CHECK(max_abs_diff(unembed_vector(embed_vector(p)), p) == 0.0);
  }
}

TEST_CASE("channel_stack matches the L1 <-> L2,1 identity and round-trips") {
  TestRng rng(17);
  const QuaternionMatrix q = rng.matrix(5, 4);

  const Eigen::MatrixXd s = channel_stack(q);
  CHECK(s.rows() == 4);
  CHECK(s.cols() == 20);
  double l21 = 0.0;
  for (Eigen::Index j = 0; j < s.cols(); ++j) l21 += s.col(j).norm();
  CHECK(l21 == doctest::Approx(q.l1_norm()).epsilon(1e-12));

  CHECK(channel_stack(QuaternionMatrix(3, 3)).cwiseAbs().maxCoeff() == 0.0);

  CHECK(max_abs_diff(channel_unstack(s, 5, 4), q) == 0.0);
}

TEST_CASE("norms: frobenius, l1, nuclear on fixed instances") {
  QuaternionMatrix one(1, 1);
  one.set(0, 0, {1, 1, 1, 1});
  CHECK(one.frobenius_norm() == doctest::Approx(2.0));
  CHECK(one.l1_norm() == doctest::Approx(2.0));

  // singular values 3 and 1
  CHECK(nuclear_norm(real_diag({3, 1})) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("nuclear norm of the embedding is four times the quaternion one") {
  TestRng rng(19);
  for (int t = 0; t < 20; ++t) {
    const QuaternionMatrix q = rng.matrix(4, 4);
    const double embedded = singular_values(embed_matrix(q)).sum();
    CHECK(embedded == doctest::Approx(4.0 * nuclear_norm(q)).epsilon(1e-8));
  }
}

TEST_CASE("frobenius norm of the embedding doubles the quaternion one") {
  TestRng rng(23);
  for (int t = 0; t < 20; ++t) {
    const QuaternionMatrix q = rng.matrix(3, 5);
    CHECK(embed_matrix(q).norm() ==
          doctest::Approx(2.0 * q.frobenius_norm()).epsilon(1e-12));
  }
}

TEST_CASE("embedding operators are linear") {
  TestRng rng(29);
  for (int t = 0; t < 20; ++t) {
    const QuaternionMatrix p = rng.matrix(3, 4);
    const QuaternionMatrix q = rng.matrix(3, 4);
    const double a = rng.uniform(), b = rng.uniform();
    const Eigen::MatrixXd lhs = embed_matrix(a * p + b * q);
    const Eigen::MatrixXd rhs = a * embed_matrix(p) + b * embed_matrix(q);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("embedding is a homomorphism for products and transposes") {
  TestRng rng(31);
  for (int t = 0; t < 10; ++t) {
    const QuaternionMatrix p = rng.matrix(4, 4);
    const QuaternionMatrix q = rng.matrix(4, 4);
    const Eigen::MatrixXd lhs = embed_matrix(matmul(p, q));
    const Eigen::MatrixXd rhs = embed_matrix(p) * embed_matrix(q);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);

    const Eigen::MatrixXd tlhs = embed_matrix(q).transpose();
    const Eigen::MatrixXd trhs = embed_matrix(conj_transpose(q));
    CHECK((tlhs - trhs).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("matrix-vector products commute with the embeddings") {
  TestRng rng(37);
  for (int t = 0; t < 20; ++t) {
    const QuaternionMatrix q = rng.matrix(5, 3);
    const QuaternionVector p = rng.vector(3);
    const Eigen::VectorXd lhs = embed_vector(matvec(q, p));
    const Eigen::VectorXd rhs = embed_matrix(q) * embed_vector(p);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(matvec(q, p).l2_norm() == doctest::Approx(rhs.norm()).epsilon(1e-12));
  }
}

TEST_CASE("embedded singular values come in equal quadruples") {
  TestRng rng(41);
  for (int t = 0; t < 20; ++t) {
    const QuaternionMatrix q = rng.matrix(5, 4);
    const Eigen::VectorXd sv = singular_values(embed_matrix(q));
    REQUIRE(sv.size() % 4 == 0);
    const double scale = sv(0);
    for (Eigen::Index g = 0; g < sv.size() / 4; ++g) {
      const auto quad = sv.segment(4 * g, 4);
      CHECK((quad.array() - quad.mean()).abs().maxCoeff() < 1e-8 * scale);
    }
    // quaternion_singular_values returns one representative per quadruple
    CHECK(quaternion_singular_values(q).size() == sv.size() / 4);
  }
}

TEST_CASE("vectorize is column-major and is_pure tracks the real plane") {
  QuaternionMatrix q(2, 2);
  q.set(0, 0, {0, 1, 0, 0});
  q.set(1, 0, {0, 2, 0, 0});
  q.set(0, 1, {0, 3, 0, 0});
  q.set(1, 1, {0, 4, 0, 0});
  const QuaternionVector v = vectorize(q);
  CHECK(v.component(1)(0) == 1.0);
  CHECK(v.component(1)(1) == 2.0);  // column-major: (1,0) comes second
  CHECK(v.component(1)(2) == 3.0);
  CHECK(v.component(1)(3) == 4.0);
  CHECK(q.is_pure());
  CHECK(max_abs_diff(unvectorize(v, 2, 2), q) == 0.0);

  q.set(0, 0, {0.5, 0, 0, 0});
  CHECK(!q.is_pure());
}

TEST_CASE("shape mismatches are rejected") {
  CHECK_THROWS_AS(QuaternionMatrix(2, 2) + QuaternionMatrix(2, 3), ShapeMismatch);
  CHECK_THROWS_AS(matmul(QuaternionMatrix(2, 2), QuaternionMatrix(3, 2)),
                  ShapeMismatch);
  CHECK_THROWS_AS(unembed_matrix(Eigen::MatrixXd::Zero(5, 8)), ShapeMismatch);
  CHECK_THROWS_AS(unembed_vector(Eigen::VectorXd::Zero(7)), ShapeMismatch);
  CHECK_THROWS_AS(channel_unstack(Eigen::MatrixXd::Zero(4, 5), 2, 2),
                  ShapeMismatch);
}
