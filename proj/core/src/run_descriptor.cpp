// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "ong/run_descriptor.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include "ong/errors.hpp"

namespace ong {
namespace {

using json = nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError("missing required field", path + key);
  return *it;
}

std::uint64_t as_unsigned(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) {
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    throw ValidationError("expected a non-negative integer", path);
  }
  return v.get<std::uint64_t>();
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError("expected a number", path);
  return v.get<double>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ValidationError("expected true or false", path);
  return v.get<bool>();
}

std::vector<std::string> as_strings(const json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError("expected an array of strings", path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string() || v[i].get<std::string>().empty()) {
      throw ValidationError("expected a non-empty string", path + "[" + std::to_string(i) + "]");
    }
    auto name = v[i].get<std::string>();
    // Concept names become CSV fields unquoted.
    if (name.find_first_of(",\"\r\n") != std::string::npos) {
      throw ValidationError("must not contain commas, quotes or newlines",
                            path + "[" + std::to_string(i) + "]");
    }
    out.push_back(std::move(name));
  }
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ValidationError("unknown field", path + key);
  }
}

json to_json(const RunDescriptor& d) {
  return json{
      {"steps", d.steps},
      {"tau", d.tau},
      {"alpha", d.alpha},
      {"mode", d.mode},
      {"share_image_features", d.share_image_features},
      {"seed", d.seed},
      {"model_seed", d.model_seed},
      {"dims",
       {{"d_model", d.dims.d_model},
        {"d_k", d.dims.d_k},
        {"d_v", d.dims.d_v},
        {"heads", d.dims.heads},
        {"blocks", d.dims.blocks},
        {"n_text", d.dims.n_text},
        {"n_image", d.dims.n_image}}},
      {"positive_concepts", d.positive_concepts},
      {"negative_concepts", d.negative_concepts},
      {"cfg_scale", d.cfg_scale},
      {"negative_text_tokens", d.negative_text_tokens},
      {"block_mask", d.block_mask},
      {"eps", d.eps},
      {"jitter", d.jitter},
  };
}

}  // namespace

GuidanceConfig RunDescriptor::guidance() const {
  GuidanceConfig g;
  g.alpha = alpha;
  g.tau = tau;
  g.mode = is_cfg() ? GuidanceMode::none : parse_guidance_mode(mode);
  g.share_image_features = share_image_features;
  g.eps = eps;
  g.block_mask = block_mask;
  g.negative_text_tokens = negative_text_tokens;
  return g;
}

SamplerConfig RunDescriptor::sampler() const {
  SamplerConfig s;
  s.steps = steps;
  s.seed = seed;
  return s;
}

RunDescriptor parse_run_descriptor(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("descriptor must be a JSON object");
  reject_unknown(doc,
                 {"steps", "tau", "alpha", "mode", "share_image_features", "seed", "model_seed",
                  "dims", "positive_concepts", "negative_concepts", "cfg_scale",
                  "negative_text_tokens", "block_mask", "eps", "jitter"},
                 "");

  RunDescriptor d;
  d.steps = as_unsigned(require(doc, "steps", ""), "steps");
  d.tau = as_unsigned(require(doc, "tau", ""), "tau");
  d.alpha = as_number(require(doc, "alpha", ""), "alpha");
  const json& mode = require(doc, "mode", "");
  if (!mode.is_string()) throw ValidationError("expected a string", "mode");
  d.mode = mode.get<std::string>();
  if (d.mode != "cfg") parse_guidance_mode(d.mode);
  d.share_image_features = as_bool(require(doc, "share_image_features", ""), "share_image_features");
  d.seed = as_unsigned(require(doc, "seed", ""), "seed");
  d.model_seed = as_unsigned(require(doc, "model_seed", ""), "model_seed");

  const json& dims = require(doc, "dims", "");
  if (!dims.is_object()) throw ValidationError("expected an object", "dims");
  reject_unknown(dims, {"d_model", "d_k", "d_v", "heads", "blocks", "n_text", "n_image"}, "dims.");
  const auto dim = [&](const char* key) {
    return as_unsigned(require(dims, key, "dims."), std::string("dims.") + key);
  };
  d.dims.d_model = dim("d_model");
  d.dims.d_k = dim("d_k");
  d.dims.d_v = dim("d_v");
  d.dims.heads = dim("heads");
  d.dims.blocks = dim("blocks");
  d.dims.n_text = dim("n_text");
  d.dims.n_image = dim("n_image");
  d.dims.validate();

  d.positive_concepts = as_strings(require(doc, "positive_concepts", ""), "positive_concepts");
  d.negative_concepts = as_strings(require(doc, "negative_concepts", ""), "negative_concepts");

  if (auto it = doc.find("cfg_scale"); it != doc.end()) d.cfg_scale = as_number(*it, "cfg_scale");
  if (auto it = doc.find("negative_text_tokens"); it != doc.end()) {
    d.negative_text_tokens = as_unsigned(*it, "negative_text_tokens");
  }
  if (auto it = doc.find("block_mask"); it != doc.end()) {
    if (!it->is_array()) throw ValidationError("expected an array of booleans", "block_mask");
    for (std::size_t i = 0; i < it->size(); ++i) {
      d.block_mask.push_back(as_bool((*it)[i], "block_mask[" + std::to_string(i) + "]"));
    }
    if (!d.block_mask.empty() && d.block_mask.size() != d.dims.blocks) {
      throw ValidationError("needs one entry per block", "block_mask");
    }
  }
  if (auto it = doc.find("eps"); it != doc.end()) d.eps = as_number(*it, "eps");
  if (auto it = doc.find("jitter"); it != doc.end()) {
    d.jitter = as_number(*it, "jitter");
    if (d.jitter < 0.0) throw ValidationError("must be >= 0", "jitter");
  }

  if (d.steps == 0) throw ValidationError("must be >= 1", "steps");
  if (d.tau > d.steps) throw ValidationError("must not exceed steps", "tau");
  if (d.positive_concepts.empty()) throw ValidationError("needs at least one concept", "positive_concepts");
  if (d.mode != "none" && d.negative_concepts.empty()) {
    throw ValidationError("needs at least one concept unless mode is none", "negative_concepts");
  }
  std::set<std::string> unique(d.positive_concepts.begin(), d.positive_concepts.end());
  unique.insert(d.negative_concepts.begin(), d.negative_concepts.end());
  if (unique.size() > d.dims.d_model) {
    throw ValidationError("more distinct concepts than dims.d_model", "negative_concepts");
  }
  d.guidance().validate();
  return d;
}

RunDescriptor load_run_descriptor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read descriptor file " + path.string(), "config");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_descriptor(buf.str());
}

std::string canonical_json(const RunDescriptor& d) { return to_json(d).dump(); }

std::string config_hash(const RunDescriptor& d) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json(d)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
  return out;
}

}  // namespace ong
