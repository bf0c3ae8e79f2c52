// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

// gerost run <config> | props <suite> [--trials N] | gen <profile> --out <dir>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gerost/config.hpp"
#include "gerost/datagen.hpp"
#include "gerost/errors.hpp"
#include "gerost/experiment.hpp"
#include "gerost/properties.hpp"

namespace {

enum Exit { kOk = 0, kPropertyFailure = 1, kConfigError = 2, kIoError = 3 };

int run_command(const std::string& config_path, const std::string& out,
                std::optional<std::uint64_t> seed, int workers) {
  gerost::ExperimentConfig cfg = gerost::load_experiment_config(config_path);
  if (!out.empty()) cfg.run.output_dir = out;
  if (seed) cfg.run.seeds = {*seed};
  if (workers >= 0) cfg.run.workers = workers;
  cfg.validate();

  const auto results = gerost::run_experiment(cfg);
  for (const auto& r : results) {
    for (const auto& run : r.runs) {
      std::cout << "seed " << r.seed << "  " << run.name
                << "  auc=" << gerost::format_double(run.roc.auc) << '\n';
    }
  }
  std::cout << "wrote " << (cfg.run.output_dir / "summary.json").string() << '\n';
  return kOk;
}

int props_command(const std::string& suite, long trials, std::uint64_t seed) {
  const gerost::PropertyReport report =
      gerost::run_property_suite(suite, trials, seed);
  std::cout << gerost::format_report(report);
  return report.passed() ? kOk : kPropertyFailure;
}

int gen_command(const std::string& profile_name, const std::string& out,
                const std::string& format, std::uint64_t seed, long frames) {
  const gerost::VideoProfile profile = gerost::profile_by_name(profile_name);
  const gerost::VideoStream stream = gerost::make_video_stream(profile, seed);
  const gerost::StreamData data =
      gerost::render_stream(stream, frames > 0 ? frames : profile.frames);

  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw gerost::IoError("cannot create " + out + ": " + ec.message());
  const std::filesystem::path dir(out);
  if (format == "csv") {
    gerost::write_stream_csv(dir / "stream.csv", data.frames);
    gerost::write_stream_csv(dir / "masks.csv", data.masks);
  } else {
    gerost::write_stream_bin(dir / "stream.bin", data.frames);
    gerost::write_stream_bin(dir / "masks.bin", data.masks);
  }
  std::cout << "wrote " << data.frames.rows() << " frames of " << profile.name
            << " (n=" << data.frames.cols() << ") to " << dir.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust subspace tracking experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string run_out;
  std::uint64_t run_seed = 0;
  int workers = -1;
  CLI::App* run = app.add_subcommand("run", "Run an experiment configuration");
  run->add_option("config", config_path, "Configuration file")->required();
  run->add_option("--out", run_out, "Override the output directory");
  CLI::Option* seed_opt = run->add_option("--seed", run_seed, "Run a single seed");
  run->add_option("--workers", workers, "Worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber);

  std::string suite;
  long trials = 100;
  std::uint64_t props_seed = 20260101;
  CLI::App* props = app.add_subcommand("props", "Run a property suite");
  props->add_option("suite", suite, "geometry, spectral-gap, inner-max, gradient, "
                                    "descent, pl or bound")
      ->required();
  props->add_option("--trials", trials, "Trial budget")->check(CLI::NonNegativeNumber);
  props->add_option("--seed", props_seed, "Base seed");

  std::string profile;
  std::string gen_out;
  std::string format = "csv";
  std::uint64_t gen_seed = 1;
  long frames = 0;
  CLI::App* gen = app.add_subcommand("gen", "Export a synthetic stream");
  gen->add_option("profile", profile, "desk or full")->required();
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--format", format, "csv or bin")
      ->check(CLI::IsMember({"csv", "bin"}));
  gen->add_option("--seed", gen_seed, "Stream seed");
  gen->add_option("--frames", frames, "Frames to export (default: profile length)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) {
      std::optional<std::uint64_t> seed;
      if (*seed_opt) seed = run_seed;
      return run_command(config_path, run_out, seed, workers);
    }
    if (*props) return props_command(suite, trials, props_seed);
    return gen_command(profile, gen_out, format, gen_seed, frames);
  } catch (const gerost::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const gerost::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPropertyFailure;
  }
}
