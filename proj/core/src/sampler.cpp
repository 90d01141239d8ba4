// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "ong/sampler.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "ong/errors.hpp"
#include "ong/random.hpp"

namespace ong {
namespace {

constexpr double kRmsEps = 1e-6;

std::vector<ModalityQkv> project_heads(const Matrix& normalized,
                                       const std::vector<Projection>& weights) {
  std::vector<ModalityQkv> out;
  out.reserve(weights.size());
  for (const auto& w : weights) out.push_back(project(normalized, w));
  return out;
}

Matrix residual(const Matrix& stream, std::span<const Matrix> head_outputs, const Matrix& out) {
  return add(stream, matmul(hstack(head_outputs), out));
}

Matrix embed_image(const ToyBackbone& model, const Matrix& latent, double flow_time) {
  Matrix x = latent;
  const auto t = model.time_embedding.row(0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto r = x.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += flow_time * t[j];
  }
  return x;
}

Matrix prediction_from_streams(const ToyBackbone& model, const Matrix& embedded,
                               const Matrix& final_image) {
  return matmul(subtract(final_image, embedded), model.head);
}

void require_text(const Matrix& text, std::size_t d_model, const char* what) {
  if (text.rows() == 0) throw DimensionError(std::string(what) + " has no tokens");
  if (text.cols() != d_model) {
    throw DimensionError(std::string(what) + " has shape " + text.shape_string() +
                         ", model d_model is " + std::to_string(d_model));
  }
  if (!text.all_finite()) throw InputError(std::string(what) + " is not finite");
}

struct ForwardResult {
  Matrix prediction;
  std::optional<Matrix> negative_prediction;  // only without image-feature sharing
};

// One full backbone pass of the positive branch, optionally with the negative
// branch alongside. `negative_latent` is set iff the negative branch keeps its
// own image stream. Guidance is applied only when `fire` is set.
ForwardResult forward(const ToyBackbone& model, const Matrix& latent, double flow_time,
                      const Matrix& positive_text, const Matrix* negative_text,
                      const Matrix* negative_latent, bool fire, const GuidanceConfig& guidance,
                      std::size_t step, const SamplerObserver* observer) {
  const Matrix embedded = embed_image(model, latent, flow_time);
  StreamState pos{positive_text, embedded};

  std::optional<StreamState> neg;
  std::optional<Matrix> neg_embedded;
  if (negative_text != nullptr) {
    neg.emplace();
    neg->text = *negative_text;
    if (negative_latent != nullptr) {
      neg_embedded = embed_image(model, *negative_latent, flow_time);
      neg->image = *neg_embedded;
    }
  }

  for (std::size_t l = 0; l < model.blocks.size(); ++l) {
    const auto& block = model.blocks[l];
    const auto& w = block.attention;

    const Qkv pos_qkv = compute_qkv({rms_normalize_rows(pos.text), rms_normalize_rows(pos.image)}, w);
    const AttentionDecomposition pos_dec = block_attention(pos_qkv);

    std::optional<AttentionDecomposition> neg_dec;
    if (neg) {
      const auto neg_text_qkv = project_heads(rms_normalize_rows(neg->text), w.text);
      std::vector<ModalityQkv> image_side;
      if (neg_embedded) {
        image_side = project_heads(rms_normalize_rows(neg->image), w.image);
      } else {
        image_side.reserve(pos_qkv.size());
        for (const auto& h : pos_qkv) image_side.push_back(h.image);
      }
      neg_dec = negative_branch(neg_text_qkv, image_side);
    }

    const bool guide_here = fire && neg_dec && guidance.enabled_for_block(l);
    std::optional<HeadStack> neg_i2t;
    std::vector<JointOutput> outputs;
    if (guide_here) {
      std::vector<Matrix> z;
      z.reserve(neg_dec->size());
      for (const auto& d : *neg_dec) z.push_back(d.z_i2t);
      neg_i2t.emplace(std::move(z));
      outputs = apply_guidance({pos_dec, *neg_i2t}, guidance);
    } else {
      outputs.reserve(pos_dec.size());
      for (const auto& d : pos_dec) outputs.push_back(assemble_positive_output(d.z_i2t, d));
    }

    if (observer != nullptr && observer->on_block) {
      observer->on_block({step, l, pos_dec, neg_i2t ? &*neg_i2t : nullptr, outputs});
    }

    std::vector<Matrix> zt, zi;
    zt.reserve(outputs.size());
    zi.reserve(outputs.size());
    for (auto& o : outputs) {
      zt.push_back(std::move(o.text));
      zi.push_back(std::move(o.image));
    }
    pos.text = residual(pos.text, zt, block.text_out);
    pos.image = residual(pos.image, zi, block.image_out);
    if (!pos.text.all_finite() || !pos.image.all_finite()) {
      throw DivergenceError(step, "block " + std::to_string(l) + " activation");
    }

    if (neg) {
      std::vector<Matrix> nzt, nzi;
      for (const auto& d : *neg_dec) {
        nzt.push_back(d.text_output());
        if (neg_embedded) nzi.push_back(d.image_output());
      }
      neg->text = residual(neg->text, nzt, block.text_out);
      if (neg_embedded) neg->image = residual(neg->image, nzi, block.image_out);
      if (!neg->text.all_finite() || (neg_embedded && !neg->image.all_finite())) {
        throw DivergenceError(step, "block " + std::to_string(l) + " negative activation");
      }
    }
  }

  ForwardResult result{prediction_from_streams(model, embedded, pos.image), std::nullopt};
  if (neg_embedded) {
    result.negative_prediction = prediction_from_streams(model, *neg_embedded, neg->image);
  }
  return result;
}

void check_finite(const Matrix& latent, std::size_t step) {
  if (!latent.all_finite()) throw DivergenceError(step);
}

}  // namespace

void ModelDims::validate() const {
  const auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ValidationError("must be positive", std::string("dims.") + name);
  };
  positive(d_model, "d_model");
  positive(d_k, "d_k");
  positive(d_v, "d_v");
  positive(heads, "heads");
  positive(blocks, "blocks");
  positive(n_text, "n_text");
  positive(n_image, "n_image");
}

void ToyBackbone::validate() const {
  dims.validate();
  if (blocks.size() != dims.blocks) {
    throw DimensionError("backbone has " + std::to_string(blocks.size()) + " blocks, dims say " +
                         std::to_string(dims.blocks));
  }
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    const auto& b = blocks[l];
    b.attention.validate();
    if (b.attention.d_model() != dims.d_model || b.attention.heads() != dims.heads ||
        b.attention.d_k() != dims.d_k || b.attention.d_v() != dims.d_v) {
      throw DimensionError("block " + std::to_string(l) + " attention weights disagree with dims");
    }
    for (const auto* out : {&b.text_out, &b.image_out}) {
      if (out->rows() != dims.heads * dims.d_v || out->cols() != dims.d_model) {
        throw DimensionError("block " + std::to_string(l) + " output projection is " +
                             out->shape_string());
      }
    }
  }
  if (time_embedding.rows() != 1 || time_embedding.cols() != dims.d_model) {
    throw DimensionError("time embedding is " + time_embedding.shape_string());
  }
  if (head.rows() != dims.d_model || head.cols() != dims.d_model) {
    throw DimensionError("prediction head is " + head.shape_string());
  }
}

std::vector<double> SamplerConfig::step_sizes() const {
  if (!schedule.empty()) return schedule;
  return std::vector<double>(steps, 1.0 / static_cast<double>(steps));
}

void SamplerConfig::validate(std::size_t tau) const {
  if (steps == 0) throw ValidationError("must be >= 1", "steps");
  if (tau > steps) throw ValidationError("must not exceed steps", "tau");
  if (!schedule.empty()) {
    if (schedule.size() != steps) throw ValidationError("needs one entry per step", "schedule");
    double total = 0.0;
    for (double dt : schedule) {
      if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError("step sizes must be positive", "schedule");
      }
      total += dt;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ValidationError("must sum to 1", "schedule");
  }
}

Matrix rms_normalize_rows(const Matrix& m) {
  Matrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    const double inv =
        1.0 / std::sqrt(squared_norm(r) / static_cast<double>(r.size()) + kRmsEps);
    for (double& x : r) x *= inv;
  }
  return out;
}

StreamState run_block(const BackboneBlock& block, const StreamState& in) {
  const auto dec = block_attention(
      compute_qkv({rms_normalize_rows(in.text), rms_normalize_rows(in.image)}, block.attention));
  std::vector<Matrix> zt, zi;
  for (const auto& d : dec) {
    zt.push_back(d.text_output());
    zi.push_back(d.image_output());
  }
  return {residual(in.text, zt, block.text_out), residual(in.image, zi, block.image_out)};
}

Matrix predict_clean(const ToyBackbone& model, const Matrix& latent, double flow_time,
                     const Matrix& text) {
  const Matrix embedded = embed_image(model, latent, flow_time);
  StreamState s{text, embedded};
  for (const auto& block : model.blocks) s = run_block(block, s);
  return prediction_from_streams(model, embedded, s.image);
}

Matrix velocity_from_prediction(const Matrix& prediction, const Matrix& latent, double flow_time) {
  return scale(subtract(prediction, latent), 1.0 / (1.0 - flow_time));
}

Matrix euler_step(const Matrix& latent, double dt, const Matrix& velocity) {
  if (!latent.same_shape(velocity)) {
    throw DimensionError("euler_step: latent " + latent.shape_string() + ", velocity " +
                         velocity.shape_string());
  }
  Matrix out = latent;
  auto o = out.data();
  auto v = velocity.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += dt * v[i];
  return out;
}

Matrix euler_integrate(Matrix initial, std::span<const double> step_sizes,
                       const VelocityField& velocity) {
  double flow_time = 0.0;
  for (std::size_t t = 0; t < step_sizes.size(); ++t) {
    initial = euler_step(initial, step_sizes[t], velocity(initial, flow_time, t));
    check_finite(initial, t);
    flow_time += step_sizes[t];
  }
  return initial;
}

LatentState denoise(const SamplerConfig& cfg, const GuidanceConfig& guidance,
                    const ToyBackbone& model, const Matrix& positive_text,
                    const Matrix& negative_text, const SamplerObserver* observer) {
  return denoise_from(standard_normal(model.dims.n_image, model.dims.d_model, cfg.seed), cfg,
                      guidance, model, positive_text, negative_text, observer);
}

LatentState denoise_from(const Matrix& initial, const SamplerConfig& cfg,
                         const GuidanceConfig& guidance, const ToyBackbone& model,
                         const Matrix& positive_text, const Matrix& negative_text,
                         const SamplerObserver* observer) {
  cfg.validate(guidance.tau);
  guidance.validate();
  model.validate();
  require_text(positive_text, model.dims.d_model, "positive text");
  if (initial.rows() == 0 || initial.cols() != model.dims.d_model) {
    throw DimensionError("initial latent has shape " + initial.shape_string());
  }
  if (!guidance.block_mask.empty() && guidance.block_mask.size() != model.blocks.size()) {
    throw ValidationError("needs one entry per block", "block_mask");
  }

  const bool guided = guidance.mode != GuidanceMode::none;
  Matrix neg_text;
  if (guided) {
    require_text(negative_text, model.dims.d_model, "negative text");
    const std::size_t k = guidance.negative_text_tokens;
    neg_text = (k == 0 || k >= negative_text.rows()) ? negative_text : slice_rows(negative_text, 0, k);
  }
  const bool own_negative_latent = guided && !guidance.share_image_features;

  const std::vector<double> steps = cfg.step_sizes();
  Matrix latent = initial;
  std::optional<Matrix> neg_latent;
  if (own_negative_latent) neg_latent = initial;

  double flow_time = 0.0;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    if (observer != nullptr && observer->on_step) observer->on_step(t, latent);
    const bool fire = guided && t >= guidance.tau;
    const bool run_negative = fire || own_negative_latent;
    const ForwardResult r =
        forward(model, latent, flow_time, positive_text, run_negative ? &neg_text : nullptr,
                neg_latent ? &*neg_latent : nullptr, fire, guidance, t, observer);

    latent = euler_step(latent, steps[t], velocity_from_prediction(r.prediction, latent, flow_time));
    check_finite(latent, t);
    if (neg_latent) {
      *neg_latent = euler_step(
          *neg_latent, steps[t],
          velocity_from_prediction(*r.negative_prediction, *neg_latent, flow_time));
      check_finite(*neg_latent, t);
    }
    flow_time += steps[t];
  }
  return {std::move(latent), steps.size()};
}

Matrix cfg_baseline_velocity(const Matrix& v_pos, const Matrix& v_neg, double scale) {
  if (!v_pos.same_shape(v_neg)) {
    throw DimensionError("cfg_baseline_velocity: shapes " + v_pos.shape_string() + " and " +
                         v_neg.shape_string());
  }
  Matrix out = v_neg;
  auto o = out.data();
  auto p = v_pos.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += scale * (p[i] - o[i]);
  return out;
}

LatentState denoise_cfg(const SamplerConfig& cfg, double scale, const ToyBackbone& model,
                        const Matrix& positive_text, const Matrix& negative_text) {
  cfg.validate(0);
  model.validate();
  require_text(positive_text, model.dims.d_model, "positive text");
  require_text(negative_text, model.dims.d_model, "negative text");
  if (!std::isfinite(scale)) throw ValidationError("must be finite", "cfg_scale");
  const std::vector<double> steps = cfg.step_sizes();
  Matrix z = euler_integrate(
      standard_normal(model.dims.n_image, model.dims.d_model, cfg.seed), steps,
      [&](const Matrix& latent, double s, std::size_t) {
        const Matrix v_pos =
            velocity_from_prediction(predict_clean(model, latent, s, positive_text), latent, s);
        const Matrix v_neg =
            velocity_from_prediction(predict_clean(model, latent, s, negative_text), latent, s);
        return cfg_baseline_velocity(v_pos, v_neg, scale);
      });
  return {std::move(z), steps.size()};
}

}  // namespace ong
