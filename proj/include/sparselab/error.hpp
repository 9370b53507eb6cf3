// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sparselab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class InvalidSparsity : public Error {
 public:
  using Error::Error;
};

/// Noise level requested for a signal whose image K*x0 is zero.
class DegenerateSignal : public Error {
 public:
  using Error::Error;
};

/// Relative error against an all-zero ground truth.
class UndefinedError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

class UnsupportedSize : public Error {
 public:
  using Error::Error;
};

/// Sensor placed on or inside the current-carrying shell.
class SingularKernel : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparselab
