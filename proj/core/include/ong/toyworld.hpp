// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

// A synthetic concept world that makes suppression measurable. Concepts are
// orthonormal directions in the text embedding space, prompts are stacks of
// jittered concept tokens, and a linear probe reads how strongly a concept
// direction survives in the generated image tokens. Probes stand in for an
// image-level "is the concept visible" judgment; they measure feature-space
// presence only.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ong/linalg.hpp"
#include "ong/sampler.hpp"

namespace ong {

class ConceptLibrary {
 public:
  /// One unit direction per distinct name, orthonormalised in first-seen
  /// order. Throws ValidationError if there are more names than dimensions.
  static ConceptLibrary build(std::span<const std::string> names, std::size_t d_model,
                              std::uint64_t seed);

  bool contains(const std::string& name) const;
  /// Throws ValidationError for unknown names.
  std::span<const double> direction(const std::string& name) const;
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t d_model() const noexcept { return directions_.cols(); }

 private:
  std::vector<std::string> names_;
  Matrix directions_;  // one unit row per name
};

/// Seeded toy backbone. Attention projections are N(0, 1/d_model); each
/// head's value/output pair is tied so the value path roughly preserves
/// concept directions, and the prediction head is near identity.
ToyBackbone build_toy_model(std::uint64_t seed, const ModelDims& dims);

inline constexpr double kDefaultJitter = 0.05;

/// tokens_per_concept rows per concept: the concept direction plus isotropic
/// noise of expected norm `jitter`. An empty list gives a 0 x d_model matrix.
Matrix embed_prompt(std::span<const std::string> concepts, const ConceptLibrary& library,
                    std::size_t tokens_per_concept, std::uint64_t seed,
                    double jitter = kDefaultJitter);

/// Mean over tokens of |<token, concept>|.
double concept_probe(const Matrix& image_tokens, std::span<const double> direction);

inline constexpr double kMinProbeForRatio = 1e-9;

struct ProbeRow {
  std::string name;
  double guided = 0.0;
  double unguided = 0.0;
  /// guided / unguided; empty when unguided <= kMinProbeForRatio.
  std::optional<double> ratio;
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
};

ProbeReport probe_concepts(const Matrix& guided, const Matrix& unguided,
                           const ConceptLibrary& library, std::span<const std::string> concepts);

/// Binary PPM (P6) of the image tokens laid out on a ceil(sqrt(n)) grid,
/// first three feature coordinates mapped affinely to RGB, each token drawn
/// as a cell x cell square.
std::string render_pixmap(const Matrix& image_tokens, std::size_t cell = 8);
void write_pixmap(const std::filesystem::path& path, const Matrix& image_tokens,
                  std::size_t cell = 8);

}  // namespace ong
