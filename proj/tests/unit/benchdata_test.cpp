// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "ong/benchdata.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "ong/errors.hpp"

namespace ong::bench {
namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<Scenario> shipped() {
  return load_scenarios(testing::source_path("data/dcs_bench.json"));
}

TEST(Dataset, ShippedCounts) {
  const auto all = shipped();
  ASSERT_EQ(all.size(), 200u);
  const CategoryStats s = category_stats(all);
  EXPECT_EQ(s.total, 200u);
  EXPECT_EQ(s.count(Category::place_scene), 77u);
  EXPECT_EQ(s.count(Category::event_action), 47u);
  EXPECT_EQ(s.count(Category::cooccurring_object), 29u);
  EXPECT_EQ(s.count(Category::dominant_subtype), 19u);
  EXPECT_EQ(s.count(Category::object_component), 18u);
  EXPECT_EQ(s.count(Category::occupation_role), 10u);
  EXPECT_DOUBLE_EQ(s.proportion(Category::place_scene), 0.385);
}

TEST(Dataset, ContainsKnownScenario) {
  const auto all = shipped();
  const Scenario want{"A doctor", "stethoscope", Category::occupation_role, Source::unknown};
  EXPECT_NE(std::find(all.begin(), all.end(), want), all.end());
}

TEST(Dataset, RoundTripIsByteExact) {
  const auto path = testing::source_path("data/dcs_bench.json");
  const std::string text = read_file(path);
  const auto all = parse_scenarios(text);
  EXPECT_EQ(serialize_scenarios(all), text);
  EXPECT_EQ(parse_scenarios(serialize_scenarios(all)), all);
}

TEST(Dataset, EmptyAndSingle) {
  const CategoryStats empty = category_stats({});
  EXPECT_EQ(empty.total, 0u);
  EXPECT_EQ(empty.proportion(Category::event_action), 0.0);
  std::ostringstream csv;
  write_stats_csv(csv, empty);
  EXPECT_NE(csv.str().find("total,0,0.0000\n"), std::string::npos);

  const std::vector<Scenario> one{{"A beach", "sea", Category::place_scene, Source::unknown}};
  const CategoryStats s = category_stats(one);
  EXPECT_EQ(s.proportion(Category::place_scene), 1.0);
  std::ostringstream csv1;
  write_stats_csv(csv1, s);
  EXPECT_EQ(csv1.str(),
            "category,count,proportion\nplace_scene,1,1.0000\nevent_action,0,0.0000\n"
            "cooccurring_object,0,0.0000\ndominant_subtype,0,0.0000\nobject_component,0,0.0000\n"
            "occupation_role,0,0.0000\ntotal,1,1.0000\n");
}

std::string field_of(const std::string& text) {
  try {
    parse_scenarios(text);
  } catch (const ValidationError& e) {
    return e.field().empty() ? e.what() : e.field();
  }
  return "<no error>";
}

TEST(Dataset, RejectsBadInput) {
  const std::string rec = R"({"prompt":"A beach","target":"sea","category":"place_scene","source":"unknown"})";
  EXPECT_EQ(field_of(R"({"version":1,"scenarios":[)" + rec + "," + rec + "]}"), "scenarios[1]");
  EXPECT_EQ(field_of(R"({"version":1,"scenarios":[{"prompt":"A","target":"b","category":"x","source":"unknown"}]})"),
            "scenarios[0]");
  EXPECT_EQ(field_of(R"({"version":1,"scenarios":[{"prompt":"","target":"b","category":"place_scene","source":"unknown"}]})"),
            "scenarios[0].prompt");
  EXPECT_EQ(field_of(R"({"version":2,"scenarios":[]})"), "version");
  EXPECT_NE(field_of("{\n\"version\": 1,\n\"scenarios\": [\n,]}").find("parse error at line 4"),
            std::string::npos);
}

bool verdict(std::initializer_list<bool> d, const VerdictRule& rule = {}) {
  return cooccurrence_verdict(std::span<const bool>(d.begin(), d.size()), rule);
}

TEST(Verdict, TwoOfFour) {
  EXPECT_FALSE(verdict({false, false, false, false}));
  EXPECT_FALSE(verdict({true, false, false, false}));
  EXPECT_TRUE(verdict({true, false, true, false}));
  EXPECT_TRUE(verdict({true, true, true, true}));
  EXPECT_THROW(verdict({true, true, true}), ValidationError);
  EXPECT_TRUE(verdict({true, true, false}, {2, 4, false}));
}

TEST(Verdict, MonotoneInDetections) {
  for (unsigned mask = 0; mask < 16; ++mask) {
    std::array<bool, 4> d{};
    for (unsigned i = 0; i < 4; ++i) d[i] = (mask >> i) & 1u;
    const bool base = cooccurrence_verdict(d);
    EXPECT_EQ(base, __builtin_popcount(mask) >= 2);
    if (!base) continue;
    for (unsigned i = 0; i < 4; ++i) {
      auto more = d;
      more[i] = true;
      EXPECT_TRUE(cooccurrence_verdict(more));
    }
  }
}

TEST(Templates, LoadAndRender) {
  const auto dir = testing::source_path("data/templates");
  const std::string t = load_template(dir, JudgeTemplate::negative_concept_suppression);
  const std::string r = render_template(t, {{"suppression target", "stethoscope"}});
  EXPECT_EQ(r.find("{suppression target}"), std::string::npos);
  EXPECT_EQ(r.find("{Suppression target}"), std::string::npos);
  EXPECT_NE(r.find("stethoscope"), std::string::npos);
  for (auto jt : {JudgeTemplate::prompt_alignment, JudgeTemplate::image_quality}) {
    EXPECT_FALSE(load_template(dir, jt).empty());
  }
  EXPECT_EQ(render_template("{prompt} / {other}", {{"prompt", "A cat"}}), "A cat / {other}");
}

}  // namespace
}  // namespace ong::bench
