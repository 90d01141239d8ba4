// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

// Orthogonal negative guidance on the image-to-text attention output.
//
// The negative prompt runs its own text tokens through the block while
// borrowing the positive branch's image-side queries, keys and values, so
// both branches attend over the same spatial layout. Its image-to-text output
// Z-_I2T is then split, per image token and per head, into the part parallel
// to the positive Z+_I2T and the part orthogonal to it; only the orthogonal
// part, scaled by alpha, is subtracted:
//
//   Zhat_I2T = Z+_I2T - alpha * (Z-_I2T - proj_{Z+_I2T}(Z-_I2T))
//   Zhat_I   = Zhat_I2T + Z+_I2I
//
// Text-modality outputs of the positive branch are left untouched.

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "ong/attention.hpp"
#include "ong/linalg.hpp"

namespace ong {

enum class GuidanceMode {
  orthogonal,  // subtract the rejection of Z-_I2T from Z+_I2T
  plain,       // ablation: subtract all of Z-_I2T
  none,        // no negative branch at all
};

std::string_view to_string(GuidanceMode mode);
/// Throws ValidationError on unknown names.
GuidanceMode parse_guidance_mode(std::string_view name);

struct GuidanceConfig {
  double alpha = 0.0;
  /// First sampler step (0-based) at which guidance fires.
  std::size_t tau = 0;
  GuidanceMode mode = GuidanceMode::orthogonal;
  /// false is the ablation where the negative branch keeps its own image side.
  bool share_image_features = true;
  /// Squared-norm threshold under which a positive row counts as zero.
  double eps = kZeroNormEps;
  /// Per-block switch; empty means every block.
  std::vector<bool> block_mask;
  /// Use only the first k negative text tokens; 0 means all of them.
  std::size_t negative_text_tokens = 0;

  bool enabled_for_block(std::size_t block) const {
    return block_mask.empty() || (block < block_mask.size() && block_mask[block]);
  }
  /// True when this configuration cannot change any output.
  bool is_identity() const { return mode == GuidanceMode::none || alpha == 0.0; }
  void validate() const;
};

/// Positive decomposition plus the negative branch's per-head Z-_I2T.
struct BranchOutputs {
  AttentionDecomposition positive;
  HeadStack negative_i2t;

  void validate() const;
};

/// Runs the negative branch: its own text-side Q/K/V with the given image-side
/// Q/K/V (the positive branch's when features are shared). Returns the full
/// per-head decomposition; the branch's outputs are not modified.
AttentionDecomposition negative_branch(const std::vector<ModalityQkv>& negative_text,
                                       const std::vector<ModalityQkv>& image_side);

/// Z-_I2T = A-_I2T V-_T for every head.
HeadStack negative_branch_i2t(const std::vector<ModalityQkv>& negative_text,
                              const std::vector<ModalityQkv>& image_side);

/// z_pos - alpha * row_reject(z_neg, z_pos, eps). Rows with ||z_pos||^2 <= eps
/// lose the whole z_neg row.
Matrix orthogonal_guide(const Matrix& z_pos, const Matrix& z_neg, const GuidanceConfig& cfg);
/// z_pos - alpha * z_neg.
Matrix plain_guide(const Matrix& z_pos, const Matrix& z_neg, const GuidanceConfig& cfg);
/// Dispatches on cfg.mode; mode none returns z_pos.
Matrix guide(const Matrix& z_pos, const Matrix& z_neg, const GuidanceConfig& cfg);

/// Z_T = Z_T2T + Z_T2I and Zhat_I = guided_i2t + Z_I2I for one head.
JointOutput assemble_positive_output(const Matrix& guided_i2t, const HeadDecomposition& decomp);

/// Guides every head of `branches` and assembles the positive outputs.
std::vector<JointOutput> apply_guidance(const BranchOutputs& branches, const GuidanceConfig& cfg);

}  // namespace ong
