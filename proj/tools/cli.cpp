// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ong/benchdata.hpp"
#include "ong/errors.hpp"
#include "ong/tensor_io.hpp"

namespace ong::cli {
namespace {

std::shared_ptr<spdlog::logger> logger() {
  auto log = spdlog::get("ong");
  if (!log) {
    log = spdlog::stderr_color_mt("ong");
    log->set_level(spdlog::level::err);
  }
  return log;
}

// Writes to `path` when given, otherwise to `fallback`.
void emit(const std::optional<std::filesystem::path>& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& writer) {
  if (!path) {
    writer(fallback);
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw ValidationError("cannot open " + path->string() + " for writing", "out");
  writer(file);
}

// Maps library exceptions onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const DivergenceError& e) {
    err << "error: divergence at step " << e.step() << '\n';
    return kDivergence;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

// Captures the attention blocks of the last sampler step.
class TensorDumper {
 public:
  TensorDumper(std::filesystem::path dir, std::size_t last_step)
      : dir_(std::move(dir)), last_step_(last_step) {
    std::filesystem::create_directories(dir_);
    observer_.on_block = [this](const BlockTrace& t) { capture(t); };
  }

  const SamplerObserver* observer() const { return &observer_; }

  void save(const std::string& name, const Matrix& m) const {
    save_tensor(dir_ / (name + ".ongt"), to_tensor(m));
  }

 private:
  void capture(const BlockTrace& t) {
    if (t.step != last_step_) return;
    const std::string prefix = "step" + std::to_string(t.step) + "_block" + std::to_string(t.block) + "_";
    const auto stack = [&](Matrix HeadDecomposition::*member) {
      std::vector<Matrix> heads;
      for (const auto& d : t.positive) heads.push_back(d.*member);
      return HeadStack(std::move(heads));
    };
    const std::pair<const char*, Matrix HeadDecomposition::*> parts[] = {
        {"a_t2t", &HeadDecomposition::a_t2t}, {"a_t2i", &HeadDecomposition::a_t2i},
        {"a_i2t", &HeadDecomposition::a_i2t}, {"a_i2i", &HeadDecomposition::a_i2i},
        {"z_t2t", &HeadDecomposition::z_t2t}, {"z_t2i", &HeadDecomposition::z_t2i},
        {"z_i2t", &HeadDecomposition::z_i2t}, {"z_i2i", &HeadDecomposition::z_i2i}};
    for (const auto& [name, member] : parts) {
      save_tensor(dir_ / (prefix + name + ".ongt"), to_tensor(stack(member)));
    }
    if (t.negative_i2t != nullptr) {
      save_tensor(dir_ / (prefix + "neg_z_i2t.ongt"), to_tensor(*t.negative_i2t));
    }
    std::vector<Matrix> guided;
    for (const auto& o : t.outputs) guided.push_back(o.image);
    save_tensor(dir_ / (prefix + "z_i_hat.ongt"), to_tensor(HeadStack(std::move(guided))));
  }

  std::filesystem::path dir_;
  std::size_t last_step_;
  SamplerObserver observer_;
};

}  // namespace

void configure_logging() {
  auto log = logger();
  const char* level = std::getenv("ONG_LOG");
  const std::string name = level == nullptr ? "error" : level;
  if (name == "debug") {
    log->set_level(spdlog::level::debug);
  } else if (name == "info") {
    log->set_level(spdlog::level::info);
  } else {
    log->set_level(spdlog::level::err);
  }
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("'" + item + "' is not a number", "alphas");
    }
    if (used != item.size()) throw ValidationError("'" + item + "' is not a number", "alphas");
    if (!std::isfinite(value) || value < 0.0) {
      throw ValidationError("values must be finite and >= 0", "alphas");
    }
    out.push_back(value);
  }
  if (out.empty()) throw ValidationError("needs at least one value", "alphas");
  return out;
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err, RunReport* report) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    const RunDescriptor d = load_run_descriptor(options.config);
    const std::string hash = config_hash(d);
    logger()->info("run {} mode={} alpha={} tau={} steps={}", hash, d.mode, d.alpha, d.tau, d.steps);

    std::optional<TensorDumper> dumper;
    if (options.dump_tensors) dumper.emplace(*options.dump_tensors, d.steps - 1);
    const ExperimentResult r = run_experiment(d, dumper ? dumper->observer() : nullptr);

    emit(options.out, out, [&](std::ostream& os) { write_probe_csv(os, d, r.probes); });
    if (options.pixmap) write_pixmap(*options.pixmap, r.guided.image);
    if (dumper) {
      dumper->save("latent", r.guided.image);
      dumper->save("latent_unguided", r.unguided.image);
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    logger()->info("run {} finished in {:.3f} s", hash, wall);
    if (report != nullptr) *report = RunReport{d, hash, ONG_VERSION, r.probes, wall};
    return int{kSuccess};
  });
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    for (double a : options.alphas) {
      if (!std::isfinite(a) || a < 0.0) throw ValidationError("values must be finite and >= 0", "alphas");
    }
    const RunDescriptor d = load_run_descriptor(options.config);
    logger()->info("sweep {} over {} alphas", config_hash(d), options.alphas.size());
    const auto points = run_sweep(d, options.alphas);
    emit(options.out, out, [&](std::ostream& os) { write_sweep_csv(os, d, points); });
    return int{kSuccess};
  });
}

int cmd_bench_stats(const BenchStatsOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto scenarios = bench::load_scenarios(options.data);
    const auto stats = bench::category_stats(scenarios);
    logger()->info("loaded {} scenarios from {}", stats.total, options.data.string());
    emit(options.out, out, [&](std::ostream& os) { bench::write_stats_csv(os, stats); });
    return int{kSuccess};
  });
}

int run_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"Orthogonal negative guidance toy runner"};
  app.set_version_flag("--version", ONG_VERSION);
  app.require_subcommand(1);

  RunOptions run;
  std::string dump_dir, pixmap, run_out;
  auto* run_cmd = app.add_subcommand("run", "Run one guided toy generation");
  run_cmd->add_option("--config", run.config, "Run descriptor JSON")->required();
  run_cmd->add_option("--dump-tensors", dump_dir, "Directory for ONGT tensor dumps");
  run_cmd->add_option("--pixmap", pixmap, "Write the final latent as a P6 pixmap");
  run_cmd->add_option("--out", run_out, "Probe CSV path (default: stdout)");

  SweepOptions sweep;
  std::string alphas, sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep the guidance scale");
  sweep_cmd->add_option("--config", sweep.config, "Run descriptor JSON")->required();
  sweep_cmd->add_option("--alphas", alphas, "Comma-separated guidance scales")->required();
  sweep_cmd->add_option("--out", sweep_out, "Sweep CSV path (default: stdout)");

  BenchStatsOptions stats;
  std::string stats_out;
  auto* stats_cmd = app.add_subcommand("bench-stats", "Category statistics of a scenario file");
  stats_cmd->add_option("--data", stats.data, "Scenario dataset JSON")->required();
  stats_cmd->add_option("--out", stats_out, "Stats CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kValidation;
  }

  const auto opt = [](const std::string& s) -> std::optional<std::filesystem::path> {
    if (s.empty()) return std::nullopt;
    return std::filesystem::path(s);
  };
  if (*run_cmd) {
    run.dump_tensors = opt(dump_dir);
    run.pixmap = opt(pixmap);
    run.out = opt(run_out);
    return cmd_run(run, out, err);
  }
  if (*sweep_cmd) {
    sweep.out = opt(sweep_out);
    try {
      sweep.alphas = parse_alpha_list(alphas);
    } catch (const ValidationError& e) {
      err << "error: " << e.what() << '\n';
      return kValidation;
    }
    return cmd_sweep(sweep, out, err);
  }
  stats.out = opt(stats_out);
  return cmd_bench_stats(stats, out, err);
}

}  // namespace ong::cli
