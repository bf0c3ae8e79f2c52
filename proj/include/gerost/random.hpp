// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace gerost {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a list of tags
/// (time index, stream id, ...). Used so that generators are pure in (seed, t).
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = mix64(base);
  for (std::uint64_t tag : tags) s = mix64(s ^ mix64(tag + 0x632be59bd9b4e019ULL));
  return s;
}

using Rng = std::mt19937_64;

inline Eigen::MatrixXd gaussian_matrix(Rng& rng, Eigen::Index rows,
                                       Eigen::Index cols, double stddev = 1.0) {
  std::normal_distribution<double> dist(0.0, stddev);
  Eigen::MatrixXd m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

}  // namespace gerost
