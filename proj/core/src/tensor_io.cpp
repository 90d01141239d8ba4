// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "ong/tensor_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "ong/errors.hpp"

namespace ong {
namespace {

constexpr std::array<char, 4> kMagic = {'O', 'N', 'G', 'T'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
    throw InputError("tensor stream truncated");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

std::size_t element_count(const std::vector<std::uint32_t>& dims) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

}  // namespace

void write_tensor(std::ostream& out, const Tensor& tensor) {
  if (element_count(tensor.dims) != tensor.entries.size()) {
    throw DimensionError("tensor dims do not match entry count");
  }
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.dims.size()));
  for (auto d : tensor.dims) put_le<std::uint32_t>(out, d);
  for (double x : tensor.entries) put_le<double>(out, x);
}

Tensor read_tensor(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw InputError("not an ONGT tensor stream");
  }
  Tensor t;
  const auto rank = get_le<std::uint32_t>(in);
  t.dims.reserve(rank);
  for (std::uint32_t i = 0; i < rank; ++i) t.dims.push_back(get_le<std::uint32_t>(in));
  const std::size_t n = element_count(t.dims);
  t.entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.entries.push_back(get_le<double>(in));
  return t;
}

Tensor to_tensor(const Matrix& m) {
  return {{static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())},
          std::vector<double>(m.data().begin(), m.data().end())};
}

Tensor to_tensor(const HeadStack& stack) {
  Tensor t{{static_cast<std::uint32_t>(stack.heads()), static_cast<std::uint32_t>(stack.rows()),
            static_cast<std::uint32_t>(stack.cols())},
           {}};
  t.entries.reserve(stack.heads() * stack.rows() * stack.cols());
  for (const auto& m : stack) t.entries.insert(t.entries.end(), m.data().begin(), m.data().end());
  return t;
}

Matrix to_matrix(const Tensor& tensor) {
  if (tensor.dims.size() != 2) {
    throw DimensionError("expected a rank-2 tensor, got rank " + std::to_string(tensor.dims.size()));
  }
  return Matrix(tensor.dims[0], tensor.dims[1], tensor.entries);
}

void save_tensor(const std::filesystem::path& path, const Tensor& tensor) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  write_tensor(out, tensor);
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return read_tensor(in);
}

}  // namespace ong
