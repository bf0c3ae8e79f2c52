// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace gerost {

/// Numeric tolerances shared by the library and its tests.
struct Tolerances {
  double orthonormality = 1e-12;  // ||U^T U - I||_F
  double rank = 1e-10;            // relative numerical-rank cutoff
  double symmetry = 1e-10;        // ||M - M^T||_F relative to ||M||_F
  double horizontality = 1e-10;   // ||Y^T V||_F relative to max(1, ||V||_F)
  double degenerate_gap = 1e-12;  // eigen gap below which a split is flagged

  double gap_floor = 1e-8;  // lower bisection bracket sits at 2 + gap_floor
  double eps_bis = 1e-6;
  int bisection_cap = 200;
  double tie_perturbation = 1e-9;

  double rho_floor = 1e-6;
  double rho_margin = 1e-3;  // adaptive radius stays below sqrt(k) - margin

  double contraction_exclusion = 1e-8;
};

inline constexpr Tolerances kTol{};

}  // namespace gerost
