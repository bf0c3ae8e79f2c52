// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

#include "gerost/datagen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gerost/errors.hpp"
#include "gerost/random.hpp"

namespace gerost {

namespace {

// Stream ids for derive_seed.
constexpr std::uint64_t kBasisStream = 0;
constexpr std::uint64_t kCoeffStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kWalkStream = 3;

constexpr std::array<char, 4> kMagic = {'G', 'S', 'T', 'R'};

template <typename U>
void put_le(std::ostream& os, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  os.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& is, const std::filesystem::path& path) {
  std::array<unsigned char, sizeof(U)> bytes;
  if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw IoError("truncated stream file " + path.string());
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(bytes[i]) << (8 * i);
  }
  return value;
}

}  // namespace

double RotatingSubspaceModel::theta(long t) const {
  return amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) /
                              static_cast<double>(period));
}

Matrix RotatingSubspaceModel::basis_at(long t) const {
  const double th = theta(t);
  return U0 * std::cos(th) + V0 * std::sin(th);
}

RotatingSubspaceModel make_rotating_model(int n, int k, double amplitude,
                                          long period, double coeff_std,
                                          double noise_std, std::uint64_t seed) {
  if (k < 1 || 2 * k > n) {
    throw DimensionError("rotating model needs 1 <= k and 2k <= n, got n=" +
                         std::to_string(n) + ", k=" + std::to_string(k));
  }
  if (!(amplitude >= 0.0) || !(amplitude < std::numbers::pi / 2.0)) {
    throw DomainError("amplitude must lie in [0, pi/2)");
  }
  if (period < 1) throw DomainError("period must be at least 1");
  if (!(coeff_std >= 0.0) || !(noise_std >= 0.0)) {
    throw DomainError("standard deviations must be non-negative");
  }
  Rng rng(derive_seed(seed, {kBasisStream}));
  const Matrix q = orthonormalize(gaussian_matrix(rng, n, 2 * k)).basis();
  RotatingSubspaceModel m;
  m.U0 = q.leftCols(k);
  m.V0 = q.rightCols(k);
  m.amplitude = amplitude;
  m.period = period;
  m.coeff_std = coeff_std;
  m.noise_std = noise_std;
  m.seed = seed;
  return m;
}

void OcclusionSpec::validate(int n) const {
  if (height < 1 || width < 1 || height * width != n) {
    throw DimensionError("occlusion frame shape " + std::to_string(height) +
                         "x" + std::to_string(width) + " does not match n=" +
                         std::to_string(n));
  }
  if (square_size < 1 || square_size > height || square_size > width) {
    throw DomainError("occlusion square does not fit in the frame");
  }
  if (walk_step < 0) throw DomainError("walk_step must be non-negative");
}

std::pair<int, int> occlusion_corner(const OcclusionSpec& occ, long t) {
  const int max_r = occ.height - occ.square_size;
  const int max_c = occ.width - occ.square_size;
  Rng start(derive_seed(occ.rng_seed, {kWalkStream, 0}));
  int r = std::uniform_int_distribution<int>(0, max_r)(start);
  int c = std::uniform_int_distribution<int>(0, max_c)(start);
  std::uniform_int_distribution<int> step(-occ.walk_step, occ.walk_step);
  for (long s = occ.start_frame + 1; s <= t; ++s) {
    Rng rng(derive_seed(occ.rng_seed, {kWalkStream, static_cast<std::uint64_t>(s)}));
    r = std::clamp(r + step(rng), 0, max_r);
    c = std::clamp(c + step(rng), 0, max_c);
  }
  return {r, c};
}

LabeledFrame frame_at(const RotatingSubspaceModel& model,
                      const OcclusionSpec* occlusion, long t) {
  if (t < 0) throw DomainError("frame index must be non-negative");
  const int n = model.ambient_dim();
  const int k = model.sub_dim();
  const auto ut = static_cast<std::uint64_t>(t);

  const Matrix basis = model.basis_at(t);
  Rng coeff_rng(derive_seed(model.seed, {kCoeffStream, ut}));
  Vector u = basis * gaussian_matrix(coeff_rng, k, 1, model.coeff_std);
  if (model.noise_std > 0.0) {
    Rng noise_rng(derive_seed(model.seed, {kNoiseStream, ut}));
    u += gaussian_matrix(noise_rng, n, 1, model.noise_std);
  }

  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
  if (occlusion != nullptr && t >= occlusion->start_frame) {
    occlusion->validate(n);
    const auto [r0, c0] = occlusion_corner(*occlusion, t);
    for (int r = r0; r < r0 + occlusion->square_size; ++r) {
      for (int c = c0; c < c0 + occlusion->square_size; ++c) {
        const int idx = r * occlusion->width + c;
        mask[static_cast<std::size_t>(idx)] = 1;
        u(idx) += occlusion->intensity;
      }
    }
  }
  return LabeledFrame{std::move(u), SubspacePoint(basis), std::move(mask), t};
}

std::vector<double> drift_sequence(const RotatingSubspaceModel& model) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(model.period));
  SubspacePoint prev = model.subspace_at(0);
  for (long t = 0; t < model.period; ++t) {
    SubspacePoint next = model.subspace_at(t + 1);
    out.push_back(chordal_distance(next, prev));
    prev = std::move(next);
  }
  return out;
}

double noise_norm_bound(const RotatingSubspaceModel& model) {
  return model.noise_std * std::sqrt(static_cast<double>(model.ambient_dim())) *
         3.0;
}

VideoProfile desk_profile() {
  VideoProfile p;
  p.name = "desk";
  return p;
}

VideoProfile full_profile() {
  VideoProfile p;
  p.name = "full";
  p.height = 64;
  p.width = 64;
  p.frames = 300;
  p.occlusion_start = 51;
  p.square_size = 10;
  return p;
}

VideoProfile profile_by_name(const std::string& name) {
  if (name == "desk") return desk_profile();
  if (name == "full") return full_profile();
  throw ConfigError("unknown generator profile '" + name +
                    "' (expected desk or full)");
}

VideoStream make_video_stream(const VideoProfile& p, std::uint64_t seed) {
  VideoStream s{make_rotating_model(p.ambient_dim(), p.k, p.amplitude, p.frames,
                                    p.coeff_std, p.noise_std, seed),
                OcclusionSpec{}};
  s.occlusion.height = p.height;
  s.occlusion.width = p.width;
  s.occlusion.start_frame = p.occlusion_start;
  s.occlusion.square_size = p.square_size;
  s.occlusion.intensity = p.intensity;
  s.occlusion.walk_step = p.walk_step;
  s.occlusion.rng_seed = derive_seed(seed, {kWalkStream});
  s.occlusion.validate(p.ambient_dim());
  return s;
}

StreamData render_stream(const VideoStream& stream, long frames) {
  const int n = stream.model.ambient_dim();
  StreamData out{Matrix(frames, n), Matrix(frames, n)};
  for (long i = 0; i < frames; ++i) {
    const LabeledFrame f = frame_at(stream.model, &stream.occlusion, i + 1);
    out.frames.row(i) = f.observation.transpose();
    for (int j = 0; j < n; ++j) out.masks(i, j) = f.foreground_mask[j];
  }
  return out;
}

void write_stream_csv(const std::filesystem::path& path, const Matrix& rows) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  char buf[32];
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", rows(i, j));
      if (j > 0) os << ',';
      os << buf;
    }
    os << '\n';
  }
  if (!os) throw IoError("write failed for " + path.string());
}

Matrix read_stream_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw IoError(path.string() + ":" + std::to_string(lineno) +
                      ": bad number '" + cell + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(path.string() + ":" + std::to_string(lineno) +
                    ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  const Eigen::Index cols = rows.empty() ? 0 : rows.front().size();
  Matrix out(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = rows[i][j];
  }
  return out;
}

void write_stream_bin(const std::filesystem::path& path, const Matrix& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(rows.cols()));
  put_le<std::uint64_t>(os, static_cast<std::uint64_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      std::uint64_t bits;
      const double v = rows(i, j);
      std::memcpy(&bits, &v, sizeof(bits));
      put_le<std::uint64_t>(os, bits);
    }
  }
  if (!os) throw IoError("write failed for " + path.string());
}

Matrix read_stream_bin(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw IoError(path.string() + " is not a stream file (bad magic)");
  }
  const auto n = get_le<std::uint32_t>(is, path);
  const auto frames = get_le<std::uint64_t>(is, path);
  Matrix out(static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      const auto bits = get_le<std::uint64_t>(is, path);
      double v;
      std::memcpy(&v, &bits, sizeof(v));
      out(i, j) = v;
    }
  }
  return out;
}

}  // namespace gerost
