// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "ong/experiment.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <future>
#include <ostream>

#include "ong/errors.hpp"
#include "ong/random.hpp"

namespace ong {
namespace {

// Sub-seed streams derived from model_seed.
enum Stream : std::uint64_t { kLibrary = 100, kPositiveText = 101, kNegativeText = 102 };

std::vector<std::string> all_concepts(const RunDescriptor& d) {
  std::vector<std::string> names = d.positive_concepts;
  names.insert(names.end(), d.negative_concepts.begin(), d.negative_concepts.end());
  return names;
}

LatentState guided_run(const RunDescriptor& d, const ToyWorld& w, const SamplerObserver* observer) {
  if (d.is_cfg()) {
    return denoise_cfg(d.sampler(), d.cfg_scale, w.model, w.positive_text, w.negative_text);
  }
  return denoise(d.sampler(), d.guidance(), w.model, w.positive_text, w.negative_text, observer);
}

LatentState unguided_run(const RunDescriptor& d, const ToyWorld& w) {
  GuidanceConfig off = d.guidance();
  off.mode = GuidanceMode::none;
  return denoise(d.sampler(), off, w.model, w.positive_text, w.negative_text);
}

// A finite latent can still be large enough for a probe to overflow.
void check_probes(const ProbeReport& report, std::size_t steps) {
  for (const auto& row : report.rows) {
    if (!std::isfinite(row.guided) || !std::isfinite(row.unguided) ||
        (row.ratio && !std::isfinite(*row.ratio))) {
      throw DivergenceError(steps - 1, "probe '" + row.name + "'");
    }
  }
}

std::string_view ratio_text(const std::optional<double>& ratio, std::string& storage) {
  if (!ratio) return "NA";
  storage = format_number(*ratio);
  return storage;
}

}  // namespace

ToyWorld build_world(const RunDescriptor& d) {
  const auto names = all_concepts(d);
  ToyWorld w{ConceptLibrary::build(names, d.dims.d_model, mix_seed(d.model_seed, kLibrary)),
             build_toy_model(d.model_seed, d.dims), {}, {}};
  w.positive_text = embed_prompt(d.positive_concepts, w.library, d.dims.n_text,
                                 mix_seed(d.model_seed, kPositiveText), d.jitter);
  w.negative_text = embed_prompt(d.negative_concepts, w.library, d.dims.n_text,
                                 mix_seed(d.model_seed, kNegativeText), d.jitter);
  return w;
}

ExperimentResult run_experiment(const RunDescriptor& d, const SamplerObserver* observer) {
  return run_experiment(d, build_world(d), observer);
}

ExperimentResult run_experiment(const RunDescriptor& d, const ToyWorld& world,
                                const SamplerObserver* observer) {
  ExperimentResult r{guided_run(d, world, observer), unguided_run(d, world), {}};
  r.probes = probe_concepts(r.guided.image, r.unguided.image, world.library, world.library.names());
  check_probes(r.probes, d.steps);
  return r;
}

std::vector<SweepPoint> run_sweep(const RunDescriptor& d, std::span<const double> alphas) {
  const ToyWorld world = build_world(d);
  const LatentState unguided = unguided_run(d, world);

  std::vector<std::future<SweepPoint>> pending;
  pending.reserve(alphas.size());
  for (double alpha : alphas) {
    pending.push_back(std::async(std::launch::async, [&d, &world, &unguided, alpha] {
      RunDescriptor point = d;
      point.alpha = alpha;
      const LatentState guided = guided_run(point, world, nullptr);
      SweepPoint p{alpha, probe_concepts(guided.image, unguided.image, world.library,
                                         world.library.names())};
      check_probes(p.probes, d.steps);
      return p;
    }));
  }
  std::vector<SweepPoint> out;
  out.reserve(pending.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_probe_csv(std::ostream& out, const RunDescriptor& d, const ProbeReport& report) {
  const std::string hash = config_hash(d);
  const std::string run_id = hash.substr(0, 8);
  out << "run_id,config_hash,seed,alpha,tau,mode,concept,probe,ratio\n";
  std::string storage;
  for (const auto& row : report.rows) {
    out << run_id << ',' << hash << ',' << d.seed << ',' << format_number(d.alpha) << ','
        << d.tau << ',' << d.mode << ',' << row.name << ',' << format_number(row.guided) << ','
        << ratio_text(row.ratio, storage) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const RunDescriptor& d, std::span<const SweepPoint> points) {
  const std::string hash = config_hash(d);
  out << "config_hash,seed,alpha,concept,probe,ratio\n";
  std::string storage;
  for (const auto& p : points) {
    for (const auto& row : p.probes.rows) {
      out << hash << ',' << d.seed << ',' << format_number(p.alpha) << ',' << row.name << ','
          << format_number(row.guided) << ',' << ratio_text(row.ratio, storage) << '\n';
    }
  }
}

}  // namespace ong
