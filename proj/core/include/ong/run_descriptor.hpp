// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

// JSON run descriptor consumed by the command-line tool:
//
//   {
//     "steps": 4, "tau": 0, "alpha": 2.0, "mode": "orthogonal",
//     "share_image_features": true, "seed": 7, "model_seed": 11,
//     "dims": {"d_model": 32, "d_k": 16, "d_v": 16, "heads": 4,
//              "blocks": 4, "n_text": 4, "n_image": 64},
//     "positive_concepts": ["doctor"], "negative_concepts": ["stethoscope"]
//   }
//
// Optional keys: "cfg_scale" (default 3.5, used when mode is "cfg"),
// "negative_text_tokens" (0 = all), "block_mask" (array of bools, one per
// block), "eps" (default 1e-12), "jitter" (default 0.05). Unknown keys are
// rejected.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ong/guidance.hpp"
#include "ong/sampler.hpp"

namespace ong {

struct RunDescriptor {
  std::size_t steps = 0;
  std::size_t tau = 0;
  double alpha = 0.0;
  /// "orthogonal", "plain", "none", or "cfg" for the output-space baseline.
  std::string mode;
  bool share_image_features = true;
  std::uint64_t seed = 0;
  std::uint64_t model_seed = 0;
  ModelDims dims;
  std::vector<std::string> positive_concepts;
  std::vector<std::string> negative_concepts;

  double cfg_scale = 3.5;
  std::size_t negative_text_tokens = 0;
  std::vector<bool> block_mask;
  double eps = kZeroNormEps;
  double jitter = 0.05;

  bool is_cfg() const { return mode == "cfg"; }
  GuidanceConfig guidance() const;
  SamplerConfig sampler() const;
};

/// Throws ValidationError whose field() names the offending JSON path.
RunDescriptor parse_run_descriptor(const std::string& json_text);
RunDescriptor load_run_descriptor(const std::filesystem::path& path);

/// Sorted-key JSON with every field spelled out, defaults included.
std::string canonical_json(const RunDescriptor& d);
/// FNV-1a 64 of canonical_json, as 16 lowercase hex digits.
std::string config_hash(const RunDescriptor& d);

}  // namespace ong
