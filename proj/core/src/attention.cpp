// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "ong/attention.hpp"

#include <cmath>
#include <string>

#include "ong/errors.hpp"

namespace ong {
namespace {

void require_columns(const Matrix& m, std::size_t cols, const std::string& what) {
  if (m.cols() != cols) {
    throw DimensionError(what + " has shape " + m.shape_string() + ", expected " +
                         std::to_string(cols) + " columns");
  }
}

void validate_projection(const Projection& p, std::size_t d_model, std::size_t d_k,
                         std::size_t d_v, const std::string& where) {
  for (const auto* m : {&p.query, &p.key, &p.value}) {
    if (m->rows() != d_model) {
      throw DimensionError(where + ": weight has shape " + m->shape_string() + ", expected " +
                           std::to_string(d_model) + " rows");
    }
    if (!m->all_finite()) throw InputError(where + ": non-finite weight");
  }
  require_columns(p.query, d_k, where + " W_Q");
  require_columns(p.key, d_k, where + " W_K");
  require_columns(p.value, d_v, where + " W_V");
}

}  // namespace

void ModalityFeatures::validate() const {
  if (text.rows() == 0) throw DimensionError("text features need at least one token");
  if (image.rows() == 0) throw DimensionError("image features need at least one token");
  if (text.cols() != image.cols()) {
    throw DimensionError("text features " + text.shape_string() + " and image features " +
                         image.shape_string() + " differ in d_model");
  }
}

std::size_t BlockWeights::d_model() const { return text.empty() ? 0 : text.front().query.rows(); }
std::size_t BlockWeights::d_k() const { return text.empty() ? 0 : text.front().query.cols(); }
std::size_t BlockWeights::d_v() const { return text.empty() ? 0 : text.front().value.cols(); }

void BlockWeights::validate() const {
  if (text.empty()) throw DimensionError("block weights need at least one head");
  if (image.size() != text.size()) {
    throw DimensionError("text has " + std::to_string(text.size()) + " heads, image has " +
                         std::to_string(image.size()));
  }
  for (std::size_t h = 0; h < heads(); ++h) {
    validate_projection(text[h], d_model(), d_k(), d_v(), "text head " + std::to_string(h));
    validate_projection(image[h], d_model(), d_k(), d_v(), "image head " + std::to_string(h));
  }
}

void HeadQkv::validate() const {
  const std::size_t dk = d_k();
  const std::size_t dv = d_v();
  require_columns(text.key, dk, "K_T");
  require_columns(image.query, dk, "Q_I");
  require_columns(image.key, dk, "K_I");
  require_columns(image.value, dv, "V_I");
  if (text.key.rows() != text.query.rows() || text.value.rows() != text.query.rows()) {
    throw DimensionError("text Q/K/V row counts differ");
  }
  if (image.key.rows() != image.query.rows() || image.value.rows() != image.query.rows()) {
    throw DimensionError("image Q/K/V row counts differ");
  }
  if (dk == 0) throw DimensionError("d_k must be positive");
}

ModalityQkv project(const Matrix& features, const Projection& weights) {
  return {matmul(features, weights.query), matmul(features, weights.key),
          matmul(features, weights.value)};
}

Qkv compute_qkv(const ModalityFeatures& features, const BlockWeights& weights) {
  features.validate();
  weights.validate();
  if (features.d_model() != weights.d_model()) {
    throw DimensionError("features have d_model " + std::to_string(features.d_model()) +
                         ", weights expect " + std::to_string(weights.d_model()));
  }
  Qkv out;
  out.reserve(weights.heads());
  for (std::size_t h = 0; h < weights.heads(); ++h) {
    out.push_back({project(features.text, weights.text[h]),
                   project(features.image, weights.image[h])});
  }
  return out;
}

Matrix attention_map(const HeadQkv& qkv) {
  qkv.validate();
  const Matrix q = vstack(qkv.text.query, qkv.image.query);
  const Matrix k = vstack(qkv.text.key, qkv.image.key);
  return softmax_rows(matmul_transposed(q, k), 1.0 / std::sqrt(static_cast<double>(qkv.d_k())));
}

JointOutput joint_attention(const HeadQkv& qkv) {
  const Matrix z = matmul(attention_map(qkv), vstack(qkv.text.value, qkv.image.value));
  const std::size_t n_text = qkv.text.query.rows();
  return {slice_rows(z, 0, n_text), slice_rows(z, n_text, qkv.image.query.rows())};
}

std::vector<JointOutput> joint_attention(const Qkv& qkv) {
  std::vector<JointOutput> out;
  out.reserve(qkv.size());
  for (const auto& head : qkv) out.push_back(joint_attention(head));
  return out;
}

HeadDecomposition block_attention(const HeadQkv& qkv) {
  // One softmax over the concatenated keys, sliced afterwards.
  const Matrix a = attention_map(qkv);
  const std::size_t nt = qkv.text.query.rows();
  const std::size_t ni = qkv.image.query.rows();
  const Matrix top = slice_rows(a, 0, nt);
  const Matrix bottom = slice_rows(a, nt, ni);

  HeadDecomposition d;
  d.a_t2t = slice_cols(top, 0, nt);
  d.a_t2i = slice_cols(top, nt, ni);
  d.a_i2t = slice_cols(bottom, 0, nt);
  d.a_i2i = slice_cols(bottom, nt, ni);
  d.z_t2t = matmul(d.a_t2t, qkv.text.value);
  d.z_t2i = matmul(d.a_t2i, qkv.image.value);
  d.z_i2t = matmul(d.a_i2t, qkv.text.value);
  d.z_i2i = matmul(d.a_i2i, qkv.image.value);
  return d;
}

AttentionDecomposition block_attention(const Qkv& qkv) {
  AttentionDecomposition out;
  out.reserve(qkv.size());
  for (const auto& head : qkv) out.push_back(block_attention(head));
  return out;
}

}  // namespace ong
