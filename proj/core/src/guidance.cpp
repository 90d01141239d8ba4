// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "ong/guidance.hpp"

#include <cmath>
#include <string>

#include "ong/errors.hpp"

namespace ong {
namespace {

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw BranchCompatibilityError(std::string(op) + ": shapes " + a.shape_string() + " and " +
                         b.shape_string() + " differ");
  }
}

}  // namespace

std::string_view to_string(GuidanceMode mode) {
  switch (mode) {
    case GuidanceMode::orthogonal:
      return "orthogonal";
    case GuidanceMode::plain:
      return "plain";
    case GuidanceMode::none:
      return "none";
  }
  return "unknown";
}

GuidanceMode parse_guidance_mode(std::string_view name) {
  if (name == "orthogonal") return GuidanceMode::orthogonal;
  if (name == "plain") return GuidanceMode::plain;
  if (name == "none") return GuidanceMode::none;
  throw ValidationError("unknown guidance mode '" + std::string(name) + "'", "mode");
}

void GuidanceConfig::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw ValidationError("alpha must be finite and >= 0", "alpha");
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ValidationError("eps must be >= 0", "eps");
}

void BranchOutputs::validate() const {
  if (positive.size() != negative_i2t.heads()) {
    throw BranchCompatibilityError("positive branch has " + std::to_string(positive.size()) +
                                   " heads, negative has " +
                                   std::to_string(negative_i2t.heads()));
  }
  for (std::size_t h = 0; h < positive.size(); ++h) {
    if (!positive[h].z_i2t.same_shape(negative_i2t[h])) {
      throw BranchCompatibilityError("head " + std::to_string(h) + ": Z+_I2T is " +
                                     positive[h].z_i2t.shape_string() + ", Z-_I2T is " +
                                     negative_i2t[h].shape_string());
    }
  }
}

AttentionDecomposition negative_branch(const std::vector<ModalityQkv>& negative_text,
                                       const std::vector<ModalityQkv>& image_side) {
  if (negative_text.size() != image_side.size() || negative_text.empty()) {
    throw BranchCompatibilityError("negative text has " + std::to_string(negative_text.size()) +
                                   " heads, image side has " + std::to_string(image_side.size()));
  }
  AttentionDecomposition out;
  out.reserve(negative_text.size());
  for (std::size_t h = 0; h < negative_text.size(); ++h) {
    const auto& text = negative_text[h];
    const auto& image = image_side[h];
    if (text.query.cols() != image.query.cols() || text.key.cols() != image.key.cols() ||
        text.value.cols() != image.value.cols()) {
      throw BranchCompatibilityError(
          "head " + std::to_string(h) + ": negative text d_k/d_v (" +
          std::to_string(text.query.cols()) + ", " + std::to_string(text.value.cols()) +
          ") differ from image side (" + std::to_string(image.query.cols()) + ", " +
          std::to_string(image.value.cols()) + ")");
    }
    out.push_back(block_attention(HeadQkv{text, image}));
  }
  return out;
}

HeadStack negative_branch_i2t(const std::vector<ModalityQkv>& negative_text,
                              const std::vector<ModalityQkv>& image_side) {
  auto decomp = negative_branch(negative_text, image_side);
  std::vector<Matrix> heads;
  heads.reserve(decomp.size());
  for (auto& d : decomp) heads.push_back(std::move(d.z_i2t));
  return HeadStack(std::move(heads));
}

Matrix orthogonal_guide(const Matrix& z_pos, const Matrix& z_neg, const GuidanceConfig& cfg) {
  require_same_shape("orthogonal_guide", z_pos, z_neg);
  if (cfg.alpha == 0.0) return z_pos;
  const Matrix rejected = row_reject(z_neg, z_pos, cfg.eps);
  Matrix out = z_pos;
  auto o = out.data();
  auto r = rejected.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= cfg.alpha * r[i];
  return out;
}

Matrix plain_guide(const Matrix& z_pos, const Matrix& z_neg, const GuidanceConfig& cfg) {
  require_same_shape("plain_guide", z_pos, z_neg);
  if (cfg.alpha == 0.0) return z_pos;
  Matrix out = z_pos;
  auto o = out.data();
  auto n = z_neg.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= cfg.alpha * n[i];
  return out;
}

Matrix guide(const Matrix& z_pos, const Matrix& z_neg, const GuidanceConfig& cfg) {
  switch (cfg.mode) {
    case GuidanceMode::orthogonal:
      return orthogonal_guide(z_pos, z_neg, cfg);
    case GuidanceMode::plain:
      return plain_guide(z_pos, z_neg, cfg);
    case GuidanceMode::none:
      require_same_shape("guide", z_pos, z_neg);
      return z_pos;
  }
  return z_pos;
}

JointOutput assemble_positive_output(const Matrix& guided_i2t, const HeadDecomposition& decomp) {
  require_same_shape("assemble_positive_output", guided_i2t, decomp.z_i2t);
  return {decomp.text_output(), add(guided_i2t, decomp.z_i2i)};
}

std::vector<JointOutput> apply_guidance(const BranchOutputs& branches, const GuidanceConfig& cfg) {
  branches.validate();
  std::vector<JointOutput> out;
  out.reserve(branches.positive.size());
  for (std::size_t h = 0; h < branches.positive.size(); ++h) {
    const auto& pos = branches.positive[h];
    out.push_back(assemble_positive_output(guide(pos.z_i2t, branches.negative_i2t[h], cfg), pos));
  }
  return out;
}

}  // namespace ong
