// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "ong/run_descriptor.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "ong/errors.hpp"

namespace ong {
namespace {

using nlohmann::json;

json reference() {
  return json::parse(R"({
    "steps": 4, "tau": 0, "alpha": 2.0, "mode": "orthogonal",
    "share_image_features": true, "seed": 1, "model_seed": 2026,
    "dims": {"d_model": 32, "d_k": 16, "d_v": 16, "heads": 4, "blocks": 4,
             "n_text": 4, "n_image": 64},
    "positive_concepts": ["doctor", "stethoscope"],
    "negative_concepts": ["stethoscope"]
  })");
}

std::string field_of(const json& j) {
  try {
    parse_run_descriptor(j.dump());
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(RunDescriptor, ParsesReference) {
  const RunDescriptor d = parse_run_descriptor(reference().dump());
  EXPECT_EQ(d.steps, 4u);
  EXPECT_EQ(d.alpha, 2.0);
  EXPECT_EQ(d.model_seed, 2026u);
  EXPECT_EQ(d.dims.n_image, 64u);
  EXPECT_EQ(d.cfg_scale, 3.5);
  EXPECT_EQ(d.guidance().mode, GuidanceMode::orthogonal);
  EXPECT_EQ(d.sampler().steps, 4u);
}

TEST(RunDescriptor, ShippedConfigsLoad) {
  for (const char* name : {"configs/reference.json", "configs/standard.json"}) {
    EXPECT_NO_THROW(load_run_descriptor(testing::source_path(name))) << name;
  }
}

TEST(RunDescriptor, MissingFieldsAreNamed) {
  for (const char* key : {"model_seed", "steps", "alpha", "mode", "positive_concepts"}) {
    json j = reference();
    j.erase(key);
    EXPECT_EQ(field_of(j), key);
  }
  json j = reference();
  j["dims"].erase("d_model");
  EXPECT_EQ(field_of(j), "dims.d_model");
}

TEST(RunDescriptor, RejectsInvalidValues) {
  auto with = [](const char* key, json v) {
    json j = reference();
    j[key] = std::move(v);
    return field_of(j);
  };
  EXPECT_EQ(with("tau", 5), "tau");
  EXPECT_EQ(with("steps", 0), "steps");
  EXPECT_EQ(with("alpha", -1.0), "alpha");
  EXPECT_EQ(with("mode", "sideways"), "mode");
  EXPECT_EQ(with("seed", -3), "seed");
  EXPECT_EQ(with("extra", 1), "extra");
  EXPECT_EQ(with("negative_concepts", json::array()), "negative_concepts");
  EXPECT_EQ(with("positive_concepts", json::array({"a,b"})), "positive_concepts[0]");
  EXPECT_EQ(with("block_mask", json::array({true})), "block_mask");
  EXPECT_THROW(parse_run_descriptor("{not json"), ValidationError);
}

TEST(RunDescriptor, ModeNoneNeedsNoNegative) {
  json j = reference();
  j["mode"] = "none";
  j["negative_concepts"] = json::array();
  EXPECT_NO_THROW(parse_run_descriptor(j.dump()));
}

TEST(RunDescriptor, CfgMode) {
  json j = reference();
  j["mode"] = "cfg";
  j["cfg_scale"] = 5.0;
  const RunDescriptor d = parse_run_descriptor(j.dump());
  EXPECT_TRUE(d.is_cfg());
  EXPECT_EQ(d.cfg_scale, 5.0);
  EXPECT_EQ(d.guidance().mode, GuidanceMode::none);
}

TEST(RunDescriptor, HashTracksContent) {
  const RunDescriptor a = parse_run_descriptor(reference().dump());
  json j = reference();
  j["alpha"] = 4.0;
  const RunDescriptor b = parse_run_descriptor(j.dump());
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_EQ(config_hash(a), config_hash(parse_run_descriptor(canonical_json(a))));
  EXPECT_NE(config_hash(a), config_hash(b));
}

}  // namespace
}  // namespace ong
