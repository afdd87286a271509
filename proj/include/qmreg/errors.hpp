// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#pragma once

#include <stdexcept>
#include <string>

namespace qmreg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operands with incompatible dimensions.
struct ShapeMismatch : Error {
  using Error::Error;
};

// Numerically singular system handed to a factorization.
struct FactorizationFailure : Error {
  using Error::Error;
};

// A solver iterate picked up NaN or Inf.
struct NonFinite : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct UnsupportedFormat : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace qmreg
