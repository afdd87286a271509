// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#pragma once

#include <cmath>

namespace qmreg {

/// Hamilton quaternion w + x i + y j + z k with the usual noncommutative
/// product (ij = -ji = k, jk = -kj = i, ki = -ik = j).
struct Quaternion {
  double w{0.0};
  double x{0.0};
  double y{0.0};
  double z{0.0};

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion zero() { return {}; }
  static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }

  constexpr double squared_modulus() const { return w * w + x * x + y * y + z * z; }

  double modulus() const { return std::sqrt(squared_modulus()); }

  constexpr bool is_pure() const { return w == 0.0; }

  friend constexpr Quaternion operator+(const Quaternion& p, const Quaternion& q) {
    return {p.w + q.w, p.x + q.x, p.y + q.y, p.z + q.z};
  }

  friend constexpr Quaternion operator-(const Quaternion& p, const Quaternion& q) {
    return {p.w - q.w, p.x - q.x, p.y - q.y, p.z - q.z};
  }

  friend constexpr Quaternion operator-(const Quaternion& q) {
    return {-q.w, -q.x, -q.y, -q.z};
  }

  // Hamilton product; order matters.
  friend constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
  }

  friend constexpr Quaternion operator*(double s, const Quaternion& q) {
    return {s * q.w, s * q.x, s * q.y, s * q.z};
  }

  friend constexpr Quaternion operator*(const Quaternion& q, double s) { return s * q; }

  friend constexpr bool operator==(const Quaternion& p, const Quaternion& q) {
    return p.w == q.w && p.x == q.x && p.y == q.y && p.z == q.z;
  }
};

inline constexpr Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
  return p * q;
}

}  // namespace qmreg
