// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded synthetic streams: a sinusoidally rotating background subspace,
// Gaussian observation noise and an optional square occlusion doing a random
// walk across the frame. Every frame is a pure function of (seed, t).

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gerost/grassmann.hpp"

namespace gerost {

/// U_t = U0 cos(theta_t) + V0 sin(theta_t), theta_t = amplitude sin(2 pi t / period).
struct RotatingSubspaceModel {
  Matrix U0;
  Matrix V0;
  double amplitude = 0.0;
  long period = 1;
  double coeff_std = 1.0;
  double noise_std = 0.0;
  std::uint64_t seed = 0;

  int ambient_dim() const noexcept { return static_cast<int>(U0.rows()); }
  int sub_dim() const noexcept { return static_cast<int>(U0.cols()); }

  double theta(long t) const;
  Matrix basis_at(long t) const;
  SubspacePoint subspace_at(long t) const { return SubspacePoint(basis_at(t)); }
};

/// Throws DimensionError when 2k > n and DomainError unless
/// amplitude in [0, pi/2), period >= 1 and both standard deviations >= 0.
RotatingSubspaceModel make_rotating_model(int n, int k, double amplitude,
                                          long period, double coeff_std,
                                          double noise_std, std::uint64_t seed);

struct OcclusionSpec {
  int height = 0;
  int width = 0;
  long start_frame = 0;
  int square_size = 1;
  double intensity = 1.0;
  int walk_step = 1;
  std::uint64_t rng_seed = 0;

  void validate(int n) const;
};

/// Top-left corner (row, col) of the square at frame t >= start_frame.
std::pair<int, int> occlusion_corner(const OcclusionSpec& occ, long t);

struct LabeledFrame {
  Vector observation;
  SubspacePoint truth_subspace;
  std::vector<std::uint8_t> foreground_mask;
  long t = 0;
};

/// u_t = U_t w_t + e_t (+ intensity on the occluded pixels once t >= start).
LabeledFrame frame_at(const RotatingSubspaceModel& model,
                      const OcclusionSpec* occlusion, long t);

/// d_c(U_{t+1}, U_t) for t = 0 .. period - 1.
std::vector<double> drift_sequence(const RotatingSubspaceModel& model);

/// 3-sigma bound on ||e_t||: noise_std * sqrt(n) * 3.
double noise_norm_bound(const RotatingSubspaceModel& model);

/// Parameters of a background-plus-occlusion video stream. Frames run
/// t = 1 .. frames.
struct VideoProfile {
  std::string name;
  int height = 32;
  int width = 32;
  long frames = 120;
  int k = 5;
  double amplitude = 0.5;
  double coeff_std = 10.0;
  double noise_std = 0.01;
  long occlusion_start = 21;
  int square_size = 6;
  double intensity = 5.0;
  int walk_step = 1;

  int ambient_dim() const noexcept { return height * width; }
};

/// 32x32, 120 frames, 6x6 square from frame 21.
VideoProfile desk_profile();
/// 64x64, 300 frames, 10x10 square from frame 51.
VideoProfile full_profile();

/// Looks a profile up by name ("desk" or "full"); throws ConfigError.
VideoProfile profile_by_name(const std::string& name);

struct VideoStream {
  RotatingSubspaceModel model;
  OcclusionSpec occlusion;
};

VideoStream make_video_stream(const VideoProfile& profile, std::uint64_t seed);

/// Frames as rows of an N x n matrix; masks as 0/1 entries of the same shape.
struct StreamData {
  Matrix frames;
  Matrix masks;
};

StreamData render_stream(const VideoStream& stream, long frames);

// Stream files. CSV: one frame per row, 17 significant digits. Binary: the
// magic "GSTR", uint32 n, uint64 N, then N*n float64, all little-endian.
// Both formats round-trip bit-exactly. Errors raise IoError.
void write_stream_csv(const std::filesystem::path& path, const Matrix& rows);
Matrix read_stream_csv(const std::filesystem::path& path);
void write_stream_bin(const std::filesystem::path& path, const Matrix& rows);
Matrix read_stream_bin(const std::filesystem::path& path);

}  // namespace gerost
