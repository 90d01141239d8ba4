// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end toy experiment: build the concept library, model and prompt
// embeddings from a run descriptor, sample guided and unguided latents from
// the same noise, and probe every concept in both.

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ong/run_descriptor.hpp"
#include "ong/sampler.hpp"
#include "ong/toyworld.hpp"

namespace ong {

struct ToyWorld {
  ConceptLibrary library;
  ToyBackbone model;
  Matrix positive_text;
  Matrix negative_text;  // 0 rows when no negative concepts are given
};

ToyWorld build_world(const RunDescriptor& d);

struct ExperimentResult {
  LatentState guided;
  LatentState unguided;
  ProbeReport probes;
};

/// Runs the descriptor's configuration and the unguided reference.
ExperimentResult run_experiment(const RunDescriptor& d, const SamplerObserver* observer = nullptr);
ExperimentResult run_experiment(const RunDescriptor& d, const ToyWorld& world,
                                const SamplerObserver* observer = nullptr);

struct SweepPoint {
  double alpha;
  ProbeReport probes;
};

/// One guided run per alpha against a single shared unguided run. Points are
/// evaluated concurrently and returned in input order.
std::vector<SweepPoint> run_sweep(const RunDescriptor& d, std::span<const double> alphas);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double x);

/// Header: run_id,config_hash,seed,alpha,tau,mode,concept,probe,ratio
void write_probe_csv(std::ostream& out, const RunDescriptor& d, const ProbeReport& report);
/// Header: config_hash,seed,alpha,concept,probe,ratio
void write_sweep_csv(std::ostream& out, const RunDescriptor& d, std::span<const SweepPoint> points);

}  // namespace ong
