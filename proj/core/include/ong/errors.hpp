// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ong {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible matrix or tensor shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise unusable numeric input.
class InputError : public Error {
 public:
  using Error::Error;
};

// Positive and negative branches disagree on head count or head dimensions.
class BranchCompatibilityError : public DimensionError {
 public:
  using DimensionError::DimensionError;
};

// Malformed configuration, descriptor, or dataset. `field()` holds the JSON
// path of the offending value when one is known.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, std::string field = {})
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// The sampler produced a non-finite latent.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t step, const std::string& what = "latent")
      : Error("non-finite " + what + " at step " + std::to_string(step)), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace ong
