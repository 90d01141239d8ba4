// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include <nlohmann/json.hpp>

namespace ong::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ong_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const json& j, const std::string& name = "cfg.json") {
    const auto p = dir_ / name;
    std::ofstream(p) << j.dump(2);
    return p;
  }

  static json reference() {
    std::ifstream in(testing::source_path("configs/reference.json"));
    return json::parse(in);
  }

  int invoke(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
    std::vector<char*> argv;
    std::string prog = "ong";
    argv.push_back(prog.data());
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream o, e;
    const int code = run_main(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return code;
  }

  fs::path dir_;
};

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST_F(CliTest, RunWritesProbeCsv) {
  std::string out;
  ASSERT_EQ(invoke({"run", "--config", testing::source_path("configs/reference.json")}, &out), 0);
  const auto rows = lines(out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "run_id,config_hash,seed,alpha,tau,mode,concept,probe,ratio");
  EXPECT_NE(rows[1].find(",doctor,"), std::string::npos);
  EXPECT_NE(rows[2].find(",stethoscope,"), std::string::npos);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  const auto cfg = testing::source_path("configs/reference.json");
  std::string a, b;
  ASSERT_EQ(invoke({"run", "--config", cfg}, &a), 0);
  ASSERT_EQ(invoke({"run", "--config", cfg, "--out", dir_ / "b.csv"}), 0);
  std::ifstream in(dir_ / "b.csv");
  std::ostringstream s;
  s << in.rdbuf();
  b = s.str();
  EXPECT_EQ(a, b);
}

TEST_F(CliTest, ModeNoneMatchesAlphaZero) {
  json none = reference();
  none["mode"] = "none";
  json zero = reference();
  zero["alpha"] = 0.0;
  std::string a, b;
  ASSERT_EQ(invoke({"run", "--config", write_config(none, "none.json")}, &a), 0);
  ASSERT_EQ(invoke({"run", "--config", write_config(zero, "zero.json")}, &b), 0);
  // Hash, alpha and mode columns differ; probe and ratio must not.
  const auto la = lines(a), lb = lines(b);
  ASSERT_EQ(la.size(), lb.size());
  for (std::size_t i = 1; i < la.size(); ++i) {
    EXPECT_EQ(la[i].substr(la[i].find(",doctor") == std::string::npos ? la[i].find(",stethoscope")
                                                                       : la[i].find(",doctor")),
              lb[i].substr(lb[i].find(",doctor") == std::string::npos ? lb[i].find(",stethoscope")
                                                                       : lb[i].find(",doctor")));
    EXPECT_EQ(la[i].substr(la[i].rfind(',')), ",1");
  }
}

TEST_F(CliTest, StandardPresetRuns) {
  json j = reference();
  j["steps"] = 28;
  j["tau"] = 2;
  j["alpha"] = 4.0;
  EXPECT_EQ(invoke({"run", "--config", write_config(j)}), 0);
}

TEST_F(CliTest, CfgBaselineRuns) {
  json j = reference();
  j["mode"] = "cfg";
  std::string out;
  EXPECT_EQ(invoke({"run", "--config", write_config(j)}, &out), 0);
  EXPECT_NE(out.find(",cfg,"), std::string::npos);
}

TEST_F(CliTest, MissingFieldExitsTwo) {
  json j = reference();
  j.erase("model_seed");
  std::string err;
  EXPECT_EQ(invoke({"run", "--config", write_config(j)}, nullptr, &err), kValidation);
  EXPECT_NE(err.find("model_seed"), std::string::npos);
  EXPECT_EQ(invoke({"run", "--config", dir_ / "absent.json"}), kValidation);
  EXPECT_EQ(invoke({"run"}), kValidation);
}

TEST_F(CliTest, DivergenceExitsThree) {
  std::string err;
  json j = reference();
  j["mode"] = "plain";
  j["alpha"] = 1.7e308;
  EXPECT_EQ(invoke({"run", "--config", write_config(j)}, nullptr, &err), kDivergence);
  j["mode"] = "orthogonal";
  j["alpha"] = 1e308;
  EXPECT_EQ(invoke({"run", "--config", write_config(j)}, nullptr, &err), kDivergence);
  EXPECT_NE(err.find("divergence at step"), std::string::npos);
}

TEST_F(CliTest, SweepAtZeroHasUnitRatios) {
  std::string out;
  ASSERT_EQ(invoke({"sweep", "--config", testing::source_path("configs/reference.json"),
                    "--alphas", "0"},
                   &out),
            0);
  const auto rows = lines(out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "config_hash,seed,alpha,concept,probe,ratio");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].substr(rows[i].rfind(',')), ",1");
}

TEST_F(CliTest, SweepRowsPerAlpha) {
  std::string out;
  ASSERT_EQ(invoke({"sweep", "--config", testing::source_path("configs/reference.json"),
                    "--alphas", "0,1,2,4"},
                   &out),
            0);
  EXPECT_EQ(lines(out).size(), 1u + 4u * 2u);
  EXPECT_EQ(invoke({"sweep", "--config", testing::source_path("configs/reference.json"),
                    "--alphas", "1,x"}),
            kValidation);
  EXPECT_EQ(invoke({"sweep", "--config", testing::source_path("configs/reference.json"),
                    "--alphas", "-1"}),
            kValidation);
}

TEST_F(CliTest, BenchStats) {
  std::string out;
  ASSERT_EQ(invoke({"bench-stats", "--data", testing::source_path("data/dcs_bench.json")}, &out), 0);
  EXPECT_NE(out.find("place_scene,77,0.3850\n"), std::string::npos);
  EXPECT_NE(out.find("total,200,1.0000\n"), std::string::npos);

  const auto empty = dir_ / "empty.json";
  std::ofstream(empty) << R"({"scenarios": [], "version": 1})";
  ASSERT_EQ(invoke({"bench-stats", "--data", empty}, &out), 0);
  EXPECT_NE(out.find("total,0,0.0000\n"), std::string::npos);
}

TEST_F(CliTest, DumpsTensorsAndPixmap) {
  ASSERT_EQ(invoke({"run", "--config", testing::source_path("configs/reference.json"),
                    "--dump-tensors", dir_ / "t", "--pixmap", dir_ / "img.ppm"}),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "t" / "latent.ongt"));
  EXPECT_TRUE(fs::exists(dir_ / "img.ppm"));
  EXPECT_FALSE(fs::is_empty(dir_ / "t"));
}

TEST_F(CliTest, ReferenceSweepMatchesGolden) {
  std::string out;
  ASSERT_EQ(invoke({"sweep", "--config", testing::source_path("configs/reference.json"),
                    "--alphas", "0,1,2,4"},
                   &out),
            0);
  const auto golden = testing::source_path("tests/golden/reference_sweep.csv");
  const char* update = std::getenv("ONG_UPDATE_GOLDEN");
  if (update != nullptr && std::string(update) == "1") std::ofstream(golden, std::ios::binary) << out;
  std::ifstream in(golden, std::ios::binary);
  ASSERT_TRUE(in.good()) << "missing " << golden;
  std::ostringstream want;
  want << in.rdbuf();
  EXPECT_EQ(out, want.str());
}

TEST(ParseAlphaList, Values) {
  EXPECT_EQ(parse_alpha_list("0,1.5,4"), (std::vector<double>{0.0, 1.5, 4.0}));
  EXPECT_THROW(parse_alpha_list(""), std::exception);
  EXPECT_THROW(parse_alpha_list("1,,2"), std::exception);
}

}  // namespace
}  // namespace ong::cli
