// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

// Closed-form inner maximization over a chordal ball.
//
// For an estimate Y in Gr(k, n) and a ball of radius rho around a nominal
// W_hat in Gr(d, n), the worst-case subspace is the top-d eigenspace of
//
//   B(Y, lambda) = lambda * P_{W_hat} - P_Y
//
// at the dual value lambda* that puts it on the ball boundary. lambda* is
// found by bisection on h(lambda) = d_c(V_d(B(lambda)), W_hat) - rho over
// (2, 2 + sqrt(k)/rho], where h is non-increasing.

#pragma once

#include <optional>

#include "gerost/grassmann.hpp"
#include "gerost/tolerances.hpp"

namespace gerost {

/// Chordal ball { W in Gr(d, n) : d_c(W, center) <= radius }.
class UncertaintyBall {
 public:
  /// Requires radius > 0. The upper limit sqrt(k) depends on the estimate
  /// dimension and is checked where the estimate is known.
  UncertaintyBall(SubspacePoint center, double radius);

  const SubspacePoint& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }

 private:
  SubspacePoint center_;
  double radius_;
};

/// How eigenspaces of B are computed.
enum class EigenPath {
  kDense,    // full n x n symmetric eigendecomposition
  kLowRank,  // (d + r) x (d + r) problem on span[W_hat, Y], r <= k
  kAuto,     // dense for n <= kAutoDenseLimit, low-rank above
};

inline constexpr int kAutoDenseLimit = 64;

/// The eigenvalue problem B(Y, lambda) for a fixed (Y, ball center), set up
/// once and solved for many values of lambda.
class Pencil {
 public:
  Pencil(const SubspacePoint& y, const SubspacePoint& center,
         EigenPath path = EigenPath::kAuto);

  struct Solution {
    Matrix top;         // orthonormal n x d basis of V_d(B(lambda))
    double distance;    // d_c(V_d(B(lambda)), center)
    double gap;         // mu_d - mu_{d+1} of B(lambda)
    Vector spectrum;    // full descending spectrum of B (n entries)
  };

  /// Top-d eigenspace of B(lambda); `with_spectrum` fills Solution::spectrum.
  Solution solve(double lambda, bool with_spectrum = false) const;

  /// d_c(V_d(B(lambda)), center) only; the inner loop of the bisection.
  double center_distance(double lambda) const;

  EigenPath path() const noexcept { return path_; }
  int reduced_dim() const noexcept { return static_cast<int>(reduced_.rows()); }

 private:
  EigenPath path_;
  int n_;
  int d_;
  Matrix center_;
  // Dense path: both projectors.
  Matrix center_proj_;
  Matrix y_proj_;
  // Low-rank path: orthonormal basis [center, extra] of span[center, Y] and
  // Y's coordinates in it.
  Matrix frame_;
  Matrix reduced_;
};

/// Dense lambda * P_center - P_Y. Requires lambda >= 0 and k + d <= n.
Matrix build_B(const SubspacePoint& y, const UncertaintyBall& ball,
               double lambda);

/// d_c(V_d(B(Y, lambda)), center) - rho. Requires lambda > 2.
double h(const SubspacePoint& y, const UncertaintyBall& ball, double lambda,
         EigenPath path = EigenPath::kAuto);

struct LambdaSolution {
  double lambda = 0.0;   // lambda*, or the lower bracket when inactive
  bool active = false;   // false: h <= 0 already at the lower bracket
  int iterations = 0;
  double h_value = 0.0;  // h at the returned lambda
  bool degenerate = false;
};

/// Bisection for the root of h on (2, 2 + sqrt(k)/rho].
///
/// Stops when |h| <= eps_bis, when the bracket has shrunk to 2^-50 of its
/// initial width, or after kTol.bisection_cap iterations. When h is already
/// non-positive at 2 + kTol.gap_floor the constraint is reported inactive.
LambdaSolution solve_lambda(const SubspacePoint& y, const UncertaintyBall& ball,
                            double eps_bis = kTol.eps_bis,
                            EigenPath path = EigenPath::kAuto);

struct WorstCaseSolution {
  SubspacePoint maximizer;
  double lambda_star = 0.0;
  bool active = false;
  double objective = 0.0;  // d_c^2(Y, maximizer)
  double gap_at_d = 0.0;
  int bisection_iters = 0;
  bool degenerate = false;
};

/// Worst-case subspace of the ball for the estimate `y` and the robust
/// objective F(Y) = d_c^2(Y, W*). Requires k <= d, k + d <= n and
/// 0 < rho < sqrt(k).
WorstCaseSolution worst_case(const SubspacePoint& y, const UncertaintyBall& ball,
                             double eps_bis = kTol.eps_bis,
                             EigenPath path = EigenPath::kAuto);

double robust_objective_F(const SubspacePoint& y, const UncertaintyBall& ball,
                          double eps_bis = kTol.eps_bis,
                          EigenPath path = EigenPath::kAuto);

/// f(Y, W) = ||P_Y^perp P_W||_F^2.
double subspace_cost(const SubspacePoint& y, const SubspacePoint& w);

/// Riemannian gradient of f(., W) at Y: -2 P_Y^perp P_W Y.
TangentVector cost_gradient(const SubspacePoint& y, const SubspacePoint& w);

}  // namespace gerost
