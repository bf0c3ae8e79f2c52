// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment configuration files: INI sections under a schema line.
//
//   schema = gerost-experiment/1
//
//   [generator]
//   profile = desk
//   noise_std = 0.01
//
//   [tracker.gerost]
//   mode = gerost
//   d = 7
//   radius = adaptive
//   mu_est = auto
//   eps_est = auto
//
//   [evaluation]
//   from_frame = 21
//
//   [run]
//   output_dir = out
//   seeds = 1, 2, 3
//
// Tracker sections may have any name after "tracker.". mu_est = auto takes
// the generator's largest drift, eps_est = auto its 3-sigma noise bound.
// Comments are whole lines starting with ';' or '#'.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gerost/datagen.hpp"
#include "gerost/tracker.hpp"

namespace gerost {

inline constexpr const char* kConfigSchema = "gerost-experiment/1";

struct NamedTracker {
  std::string name;
  TrackerConfig cfg;
  bool mu_auto = false;   // mu_est from the generator's drift sequence
  bool eps_auto = false;  // eps_est from the generator's noise bound
};

struct EvaluationConfig {
  long from_frame = 0;  // 0: the occlusion start frame
  long to_frame = 0;    // 0: the last frame
  int roc_points = 256;   // points kept in roc.csv
  bool bound_check = false;
  int fstar_iters = 500;  // descent budget of the F* oracle per step
};

struct RunConfig {
  std::filesystem::path output_dir = "out";
  std::vector<std::uint64_t> seeds{1};
  int workers = 0;                    // 0: hardware concurrency
  std::string stream_format = "none";  // none | csv | bin
};

struct ExperimentConfig {
  VideoProfile generator = desk_profile();
  std::vector<NamedTracker> trackers;
  EvaluationConfig evaluation;
  RunConfig run;

  /// Throws ConfigError when any nested invariant fails or no tracker is
  /// configured.
  void validate() const;
};

/// Parses and validates a configuration. Syntax errors carry the line
/// number; value errors name the offending section and key.
ExperimentConfig parse_experiment_config(std::istream& in);

/// Throws IoError when the file cannot be opened.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace gerost
