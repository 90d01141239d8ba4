// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

// Joint text/image attention of a multimodal transformer block. Text and
// image tokens are projected with separate per-modality weights, concatenated
// along the token axis, and attended with one softmax per query row over all
// keys. `block_attention` computes the same thing but keeps the four
// modality sub-blocks of the attention map and their value products apart.
// No positional encoding is applied.

#pragma once

#include <cstddef>
#include <vector>

#include "ong/linalg.hpp"

namespace ong {

/// Text (N_T x d_model) and image (N_I x d_model) features entering a block.
struct ModalityFeatures {
  Matrix text;
  Matrix image;

  std::size_t d_model() const noexcept { return text.cols(); }
  /// Throws DimensionError on empty modalities or mismatched widths.
  void validate() const;
};

/// One head's projection weights for one modality.
struct Projection {
  Matrix query;  // d_model x d_k
  Matrix key;    // d_model x d_k
  Matrix value;  // d_model x d_v
};

struct BlockWeights {
  std::vector<Projection> text;   // one per head
  std::vector<Projection> image;  // one per head

  std::size_t heads() const noexcept { return text.size(); }
  std::size_t d_model() const;
  std::size_t d_k() const;
  std::size_t d_v() const;
  void validate() const;
};

struct ModalityQkv {
  Matrix query;
  Matrix key;
  Matrix value;
};

struct HeadQkv {
  ModalityQkv text;
  ModalityQkv image;

  std::size_t d_k() const noexcept { return text.query.cols(); }
  std::size_t d_v() const noexcept { return text.value.cols(); }
  void validate() const;
};

using Qkv = std::vector<HeadQkv>;

ModalityQkv project(const Matrix& features, const Projection& weights);
Qkv compute_qkv(const ModalityFeatures& features, const BlockWeights& weights);

/// Full (N_T + N_I) x (N_T + N_I) attention map of one head.
Matrix attention_map(const HeadQkv& qkv);

struct JointOutput {
  Matrix text;   // Z_T, N_T x d_v
  Matrix image;  // Z_I, N_I x d_v
};

JointOutput joint_attention(const HeadQkv& qkv);
std::vector<JointOutput> joint_attention(const Qkv& qkv);

/// The four sub-blocks of one head's attention map and their value products.
/// Row i of [a_t2t | a_t2i] (resp. [a_i2t | a_i2i]) is one softmax row.
struct HeadDecomposition {
  Matrix a_t2t, a_t2i, a_i2t, a_i2i;
  Matrix z_t2t, z_t2i, z_i2t, z_i2i;

  Matrix text_output() const { return add(z_t2t, z_t2i); }
  Matrix image_output() const { return add(z_i2t, z_i2i); }
};

using AttentionDecomposition = std::vector<HeadDecomposition>;

HeadDecomposition block_attention(const HeadQkv& qkv);
AttentionDecomposition block_attention(const Qkv& qkv);

}  // namespace ong
