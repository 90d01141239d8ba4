// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "ong/toyworld.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ong/errors.hpp"
#include "ong/random.hpp"

namespace ong {
namespace {

// Sub-seed streams of build_toy_model.
enum Stream : std::uint64_t { kAttention = 1, kOutput = 2, kTime = 3, kHead = 4 };

// Query/key projections share one subspace per head, so attention scores
// follow feature similarity: an image token attends to the text tokens whose
// concept it already carries. kMatchGain sets how sharp that matching is.
constexpr double kMatchGain = 1.0;
constexpr double kProjectionNoise = 0.25;
// Image-side values are weak; text values carry the semantics.
constexpr double kImageValueGain = 0.25;
// W_O is tied to the text W_V^T so the text value path roughly preserves
// concept directions: sum_h W_V,h W_V,h^T is about (heads * d_v / d_model) I.
constexpr double kOutputNoise = 0.25;
constexpr double kHeadNoise = 0.1;

}  // namespace

ConceptLibrary ConceptLibrary::build(std::span<const std::string> names, std::size_t d_model,
                                     std::uint64_t seed) {
  ConceptLibrary lib;
  for (const auto& n : names) {
    if (std::find(lib.names_.begin(), lib.names_.end(), n) == lib.names_.end()) {
      lib.names_.push_back(n);
    }
  }
  if (lib.names_.size() > d_model) {
    throw ValidationError(std::to_string(lib.names_.size()) + " concepts do not fit in d_model " +
                              std::to_string(d_model),
                          "concepts");
  }
  Rng rng(seed);
  lib.directions_ = Matrix(lib.names_.size(), d_model);
  for (std::size_t i = 0; i < lib.names_.size(); ++i) {
    auto v = lib.directions_.row(i);
    // Gram-Schmidt against earlier rows; redraw on (practically impossible) collapse.
    for (;;) {
      for (double& x : v) x = rng.normal();
      for (std::size_t k = 0; k < i; ++k) {
        const auto u = lib.directions_.row(k);
        const double c = dot(v, u);
        for (std::size_t j = 0; j < d_model; ++j) v[j] -= c * u[j];
      }
      const double n = std::sqrt(squared_norm(v));
      if (n > 1e-6) {
        for (double& x : v) x /= n;
        break;
      }
    }
  }
  return lib;
}

bool ConceptLibrary::contains(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::span<const double> ConceptLibrary::direction(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ValidationError("unknown concept '" + name + "'", "concepts");
  return directions_.row(static_cast<std::size_t>(it - names_.begin()));
}

ToyBackbone build_toy_model(std::uint64_t seed, const ModelDims& dims) {
  dims.validate();
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(dims.d_model));
  const double tie = static_cast<double>(dims.d_model) / static_cast<double>(dims.heads * dims.d_v);

  Rng attn(mix_seed(seed, kAttention));
  Rng outn(mix_seed(seed, kOutput));

  ToyBackbone model;
  model.dims = dims;
  model.blocks.reserve(dims.blocks);
  for (std::size_t l = 0; l < dims.blocks; ++l) {
    BackboneBlock block;
    for (std::size_t h = 0; h < dims.heads; ++h) {
      const Matrix match = normal_matrix(attn, dims.d_model, dims.d_k, kMatchGain * inv_sqrt_d);
      const auto matched = [&] {
        return add(match, normal_matrix(attn, dims.d_model, dims.d_k, kProjectionNoise * inv_sqrt_d));
      };
      Projection text{matched(), matched(), normal_matrix(attn, dims.d_model, dims.d_v, inv_sqrt_d)};
      Projection image{matched(), matched(),
                       normal_matrix(attn, dims.d_model, dims.d_v, kImageValueGain * inv_sqrt_d)};
      block.attention.text.push_back(std::move(text));
      block.attention.image.push_back(std::move(image));
    }
    Matrix tied = scale(transpose(block.attention.text.front().value), tie);
    for (std::size_t h = 1; h < dims.heads; ++h) {
      tied = vstack(tied, scale(transpose(block.attention.text[h].value), tie));
    }
    block.text_out = add(tied, normal_matrix(outn, tied.rows(), tied.cols(), kOutputNoise * inv_sqrt_d));
    block.image_out = add(tied, normal_matrix(outn, tied.rows(), tied.cols(), kOutputNoise * inv_sqrt_d));
    model.blocks.push_back(std::move(block));
  }

  Rng time_rng(mix_seed(seed, kTime));
  model.time_embedding = normal_matrix(time_rng, 1, dims.d_model, inv_sqrt_d);
  Rng head_rng(mix_seed(seed, kHead));
  model.head = add(Matrix::identity(dims.d_model),
                   normal_matrix(head_rng, dims.d_model, dims.d_model, kHeadNoise * inv_sqrt_d));
  return model;
}

Matrix embed_prompt(std::span<const std::string> concepts, const ConceptLibrary& library,
                    std::size_t tokens_per_concept, std::uint64_t seed, double jitter) {
  const std::size_t d = library.d_model();
  Matrix out(concepts.size() * tokens_per_concept, d);
  Rng rng(seed);
  const double sigma = jitter / std::sqrt(static_cast<double>(d));
  for (std::size_t c = 0; c < concepts.size(); ++c) {
    const auto dir = library.direction(concepts[c]);
    for (std::size_t k = 0; k < tokens_per_concept; ++k) {
      auto row = out.row(c * tokens_per_concept + k);
      for (std::size_t j = 0; j < d; ++j) row[j] = dir[j] + sigma * rng.normal();
    }
  }
  return out;
}

double concept_probe(const Matrix& image_tokens, std::span<const double> direction) {
  if (image_tokens.cols() != direction.size()) {
    throw DimensionError("concept_probe: tokens are " + image_tokens.shape_string() +
                         ", concept has " + std::to_string(direction.size()) + " entries");
  }
  if (image_tokens.rows() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < image_tokens.rows(); ++i) {
    total += std::abs(dot(image_tokens.row(i), direction));
  }
  return total / static_cast<double>(image_tokens.rows());
}

ProbeReport probe_concepts(const Matrix& guided, const Matrix& unguided,
                           const ConceptLibrary& library, std::span<const std::string> concepts) {
  ProbeReport report;
  for (const auto& name : concepts) {
    ProbeRow row;
    row.name = name;
    row.guided = concept_probe(guided, library.direction(name));
    row.unguided = concept_probe(unguided, library.direction(name));
    if (row.unguided > kMinProbeForRatio) row.ratio = row.guided / row.unguided;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string render_pixmap(const Matrix& image_tokens, std::size_t cell) {
  const std::size_t n = image_tokens.rows();
  std::size_t grid = 1;
  while (grid * grid < n) ++grid;
  const std::size_t channels = std::min<std::size_t>(3, image_tokens.cols());

  double range = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < channels; ++c) range = std::max(range, std::abs(image_tokens(i, c)));
  }
  if (range == 0.0) range = 1.0;

  const std::size_t side = grid * cell;
  std::string out = "P6\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + side * side * 3, '\0');
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char rgb[3] = {0, 0, 0};
    for (std::size_t c = 0; c < channels; ++c) {
      const double unit = (image_tokens(i, c) / range + 1.0) * 0.5;
      rgb[c] = static_cast<unsigned char>(std::lround(std::clamp(unit, 0.0, 1.0) * 255.0));
    }
    const std::size_t gy = i / grid;
    const std::size_t gx = i % grid;
    for (std::size_t y = 0; y < cell; ++y) {
      for (std::size_t x = 0; x < cell; ++x) {
        const std::size_t px = header + ((gy * cell + y) * side + gx * cell + x) * 3;
        out[px] = static_cast<char>(rgb[0]);
        out[px + 1] = static_cast<char>(rgb[1]);
        out[px + 2] = static_cast<char>(rgb[2]);
      }
    }
  }
  return out;
}

void write_pixmap(const std::filesystem::path& path, const Matrix& image_tokens, std::size_t cell) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  const std::string bytes = render_pixmap(image_tokens, cell);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace ong
