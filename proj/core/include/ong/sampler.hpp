// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

// Rectified-flow Euler sampler over a small multimodal transformer.
//
// Flow time runs from 0 (noise) to 1 (clean latent) in explicit Euler steps.
// At flow time s the backbone predicts a clean latent x from the current latent
// z, and the velocity is (x - z) / (1 - s). Inside every block the positive
// branch's image-modality attention output is replaced by its guided version
// once the step index reaches tau.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ong/attention.hpp"
#include "ong/guidance.hpp"
#include "ong/linalg.hpp"

namespace ong {

struct ModelDims {
  std::size_t d_model = 32;
  std::size_t d_k = 16;
  std::size_t d_v = 16;
  std::size_t heads = 4;
  std::size_t blocks = 4;
  /// Text tokens emitted per prompt concept.
  std::size_t n_text = 4;
  std::size_t n_image = 64;

  void validate() const;
  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

struct BackboneBlock {
  BlockWeights attention;
  Matrix text_out;   // (heads * d_v) x d_model
  Matrix image_out;  // (heads * d_v) x d_model
};

struct ToyBackbone {
  ModelDims dims;
  std::vector<BackboneBlock> blocks;
  Matrix time_embedding;  // 1 x d_model, added to image tokens scaled by flow time
  Matrix head;            // d_model x d_model, maps the accumulated image update to x

  void validate() const;
};

/// Step counts and guidance scales of the two reference sampling regimes.
struct Preset {
  std::size_t steps;
  double alpha;
  std::size_t tau;

  static constexpr Preset standard() { return {28, 4.0, 2}; }
  static constexpr Preset few_step() { return {4, 2.0, 0}; }
};

struct SamplerConfig {
  std::size_t steps = 28;
  std::uint64_t seed = 0;
  /// Euler step sizes in flow time; empty means uniform 1/steps.
  std::vector<double> schedule;

  std::vector<double> step_sizes() const;
  /// Also checks 0 <= tau <= steps.
  void validate(std::size_t tau) const;
};

struct LatentState {
  Matrix image;  // n_image x d_model
  std::size_t step = 0;
};

/// Per-block view handed to SamplerObserver::on_block.
struct BlockTrace {
  std::size_t step;
  std::size_t block;
  const AttentionDecomposition& positive;
  const HeadStack* negative_i2t;  // null when guidance did not fire
  const std::vector<JointOutput>& outputs;
};

struct SamplerObserver {
  std::function<void(std::size_t step, const Matrix& latent)> on_step;
  std::function<void(const BlockTrace&)> on_block;
};

/// x / sqrt(mean(x^2) + 1e-6) per row.
Matrix rms_normalize_rows(const Matrix& m);

/// Text and image token streams between blocks.
struct StreamState {
  Matrix text;
  Matrix image;
};

/// One unguided block: pre-normalised joint attention with residual update.
StreamState run_block(const BackboneBlock& block, const StreamState& in);

/// Unguided clean-latent prediction for `latent` at `flow_time`.
Matrix predict_clean(const ToyBackbone& model, const Matrix& latent, double flow_time,
                     const Matrix& text);

/// (prediction - latent) / (1 - flow_time).
Matrix velocity_from_prediction(const Matrix& prediction, const Matrix& latent, double flow_time);

Matrix euler_step(const Matrix& latent, double dt, const Matrix& velocity);

using VelocityField = std::function<Matrix(const Matrix& latent, double flow_time, std::size_t step)>;

/// Explicit Euler over `step_sizes`; throws DivergenceError on a non-finite state.
Matrix euler_integrate(Matrix initial, std::span<const double> step_sizes,
                       const VelocityField& velocity);

/// Guided sampling from N(0, I) noise drawn with cfg.seed.
LatentState denoise(const SamplerConfig& cfg, const GuidanceConfig& guidance,
                    const ToyBackbone& model, const Matrix& positive_text,
                    const Matrix& negative_text, const SamplerObserver* observer = nullptr);

/// Same as denoise but starting from an explicit initial latent.
LatentState denoise_from(const Matrix& initial, const SamplerConfig& cfg,
                         const GuidanceConfig& guidance, const ToyBackbone& model,
                         const Matrix& positive_text, const Matrix& negative_text,
                         const SamplerObserver* observer = nullptr);

/// v_neg + scale * (v_pos - v_neg).
Matrix cfg_baseline_velocity(const Matrix& v_pos, const Matrix& v_neg, double scale);

/// Output-space baseline: both prompts run unguided on the same latent and the
/// velocities are mixed with cfg_baseline_velocity.
LatentState denoise_cfg(const SamplerConfig& cfg, double scale, const ToyBackbone& model,
                        const Matrix& positive_text, const Matrix& negative_text);

}  // namespace ong
