// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

// Binary tensor dump format:
//   bytes 0..3   magic "ONGT"
//   u32 LE       rank
//   u32 LE x rank  dims, outermost first
//   f64 LE x prod(dims)  entries, row-major
// A Matrix is written as rank 2; a HeadStack as rank 3 (heads, rows, cols).

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ong/linalg.hpp"

namespace ong {

struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<double> entries;
};

void write_tensor(std::ostream& out, const Tensor& tensor);
Tensor read_tensor(std::istream& in);

Tensor to_tensor(const Matrix& m);
Tensor to_tensor(const HeadStack& stack);
/// Requires rank 2.
Matrix to_matrix(const Tensor& tensor);

void save_tensor(const std::filesystem::path& path, const Tensor& tensor);
Tensor load_tensor(const std::filesystem::path& path);

}  // namespace ong
