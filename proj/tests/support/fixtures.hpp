// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded random inputs shared by unit tests, the acceptance suite and benchmarks.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "ong/attention.hpp"
#include "ong/random.hpp"

namespace ong::testing {

struct QkvShape {
  std::size_t heads = 1;
  std::size_t n_text = 4;
  std::size_t n_image = 8;
  std::size_t d_k = 8;
  std::size_t d_v = 8;
};

inline ModalityQkv random_modality(Rng& rng, std::size_t n, std::size_t d_k, std::size_t d_v) {
  return {normal_matrix(rng, n, d_k), normal_matrix(rng, n, d_k), normal_matrix(rng, n, d_v)};
}

inline Qkv random_qkv(Rng& rng, const QkvShape& s) {
  Qkv out;
  for (std::size_t h = 0; h < s.heads; ++h) {
    out.push_back({random_modality(rng, s.n_text, s.d_k, s.d_v),
                   random_modality(rng, s.n_image, s.d_k, s.d_v)});
  }
  return out;
}

/// Shape drawn uniformly within 1..8 heads, 1..16 text and 1..64 image tokens.
inline QkvShape random_shape(Rng& rng) {
  auto pick = [&](std::size_t hi) { return 1 + static_cast<std::size_t>(rng.uniform() * hi); };
  return {pick(8), pick(16), pick(64), pick(16), pick(16)};
}

inline std::filesystem::path source_path(const char* relative) {
  return std::filesystem::path(ONG_SOURCE_DIR) / relative;
}

}  // namespace ong::testing
