// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "ong/linalg.hpp"

namespace ong {

/// Portable seeded generator. Uniforms take the top 53 bits of a
/// std::mt19937_64 draw; normals use the Box-Muller transform on two
/// uniforms, caching the second variate. std::normal_distribution is avoided
/// because its algorithm differs between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// rows x cols matrix of independent N(0, stddev^2) draws, row-major order.
Matrix normal_matrix(Rng& rng, std::size_t rows, std::size_t cols, double stddev = 1.0);
Matrix standard_normal(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// SplitMix64 finaliser; derives independent sub-seeds from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ong
