// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

// Runs configured trackers over seeded video streams and writes the results.
//
// Layout under the output directory:
//   <seed>/<tracker>/metrics.csv, roc.csv, diagnostics.csv
//   <seed>/stream.{csv,bin}, <seed>/masks.{csv,bin}   (if stream_format != none)
//   summary.json

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gerost/config.hpp"
#include "gerost/eval.hpp"

namespace gerost {

struct TrackerRun {
  std::string name;
  TrackerConfig cfg;  // with auto estimates resolved
  std::vector<StepDiagnostics> diagnostics;
  std::vector<double> d_c;  // d_c(U_t, U_hat_t) per diagnostics record
  RocCurve roc;
  std::optional<double> beta_hat;
  std::optional<int> violations;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<TrackerRun> runs;
};

/// Copy of `tracker` with mu_est = auto and eps_est = auto filled in from the
/// stream's largest drift and 3-sigma noise bound.
NamedTracker resolve_estimates(const NamedTracker& tracker,
                               const VideoStream& stream);

/// One tracker over frames 1 .. profile.frames. Foreground scores of frame t
/// use the estimate after the update with frame t.
TrackerRun run_tracker(const VideoStream& stream, const VideoProfile& profile,
                       const NamedTracker& tracker,
                       const EvaluationConfig& evaluation, std::uint64_t seed);

/// All trackers on the stream for one seed.
SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed);

/// Runs every seed on a worker pool and writes all artifacts. Results are
/// returned in the configured seed order. Throws IoError when the output
/// directory cannot be written.
std::vector<SeedResult> run_experiment(const ExperimentConfig& cfg);

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<StepDiagnostics>& diagnostics,
                           const std::vector<double>& d_c);

}  // namespace gerost
