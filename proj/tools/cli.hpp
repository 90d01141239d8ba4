// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

// Batch front-end. Every command writes its primary output (CSV) to a file or
// to `out`, diagnostics to `err`, and returns a process exit code:
//   0 success, 2 validation failure, 3 numerical divergence.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ong/experiment.hpp"
#include "ong/run_descriptor.hpp"

namespace ong::cli {

enum ExitCode : int { kSuccess = 0, kValidation = 2, kDivergence = 3 };

struct RunReport {
  RunDescriptor descriptor;
  std::string config_hash;
  std::string version;
  ProbeReport probes;
  double wall_seconds = 0.0;
};

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> dump_tensors;
  std::optional<std::filesystem::path> pixmap;
  std::optional<std::filesystem::path> out;
};

struct SweepOptions {
  std::filesystem::path config;
  std::vector<double> alphas;
  std::optional<std::filesystem::path> out;
};

struct BenchStatsOptions {
  std::filesystem::path data;
  std::optional<std::filesystem::path> out;
};

/// Executes one run. The report is filled in on success.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err,
            RunReport* report = nullptr);
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);
int cmd_bench_stats(const BenchStatsOptions& options, std::ostream& out, std::ostream& err);

/// "0,1,2.5" -> {0, 1, 2.5}. Throws ValidationError on non-finite or negative
/// values.
std::vector<double> parse_alpha_list(const std::string& text);

/// Applies ONG_LOG (error, info, debug; default error).
void configure_logging();

int run_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ong::cli
