// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

// Online subspace tracking over a sliding window.
//
// Each sample slides the window, recomputes the nominal top-d subspace of the
// window, picks a ball radius and runs K Riemannian gradient steps on the
// estimate. In GeRoST mode every step descends toward the worst-case subspace
// of the ball; in GREAT mode it descends toward the nominal subspace itself.

#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "gerost/grassmann.hpp"
#include "gerost/worstcase.hpp"

namespace gerost {

enum class TrackerMode { kGerost, kGreat };

struct FixedRadius {
  double rho = 0.1;
};

/// Radius from the window noise bound:
///   eta   = mu ||W D||_F + eps sqrt(T) (mu (T-1) + 1),  D = diag(T-1, ..., 0)
///   p_bar = min(eta / sigma_lower, p_cap)
///   rho   = sqrt(2) p_bar / (1 - p_bar) [+ sqrt(d - k)]
/// clamped into [rho_floor, sqrt(k) - rho_margin].
struct AdaptiveRadius {
  double mu_est = 0.0;
  double eps_est = 0.0;
  double sigma_lower = 1.0;
  double p_cap = 0.5;
  bool include_dk_term = true;
};

using RadiusPolicy = std::variant<FixedRadius, AdaptiveRadius>;

/// How the first estimate is formed once the window has filled.
enum class InitPolicy {
  kRandomInNominal,  // random k-dim subspace of the nominal subspace
  kTopK,             // top-k left singular subspace of the window
};

struct TrackerConfig {
  int n = 0;
  int k = 1;
  int d = 1;
  int T = 1;
  int K = 1;
  double alpha = 0.25;
  double eps_bis = kTol.eps_bis;
  RadiusPolicy radius = FixedRadius{};
  TrackerMode mode = TrackerMode::kGerost;
  EigenPath eigen_path = EigenPath::kAuto;
  InitPolicy init = InitPolicy::kRandomInNominal;
  std::uint64_t init_seed = 0;

  /// Throws ConfigError unless k <= d, k + d <= n, T >= d, K >= 1, alpha > 0
  /// and the radius policy parameters are admissible.
  void validate() const;
};

struct StepDiagnostics {
  long t = 0;
  double rho_t = 0.0;
  double lambda_star = 0.0;  // after the final inner iteration
  bool lambda_active = false;
  double p_bar_t = 0.0;
  double eta_t = 0.0;
  bool radius_capped = false;  // p_bar_t hit p_cap
  double F_before = 0.0;  // objective at Y_0
  double F_after = 0.0;   // objective at Y_K
  std::vector<double> F_trace;     // objective at Y_0 .. Y_K
  std::vector<double> grad_norms;  // ||grad|| at Y_0 .. Y_{K-1}
  int bisection_iters = 0;         // summed over the inner iterations
  bool nominal_degenerate = false;
  bool eigen_degenerate = false;
};

/// Fixed-capacity buffer of the most recent samples.
class SampleWindow {
 public:
  SampleWindow(int n, int capacity);

  void push(const Vector& u);
  bool full() const noexcept { return count_ == capacity(); }
  int size() const noexcept { return count_; }
  int capacity() const noexcept { return static_cast<int>(buffer_.cols()); }

  /// n x size() matrix, oldest sample first.
  Matrix ordered() const;

 private:
  Matrix buffer_;
  int head_ = 0;  // slot the next sample goes to
  int count_ = 0;
};

struct TrackerState {
  SampleWindow window;
  std::optional<SubspacePoint> estimate;
  long t = 0;
  std::optional<StepDiagnostics> last_diag;  // empty while warming up

  explicit TrackerState(const TrackerConfig& cfg);
};

struct NominalSubspace {
  SubspacePoint subspace;
  Vector singular_values;
  bool degenerate = false;  // fewer than d significant singular values
};

/// Top-d left singular subspace of the window. A rank-deficient window is
/// completed with coordinate directions orthogonalized against the found
/// ones and flagged.
NominalSubspace nominal_subspace(const Matrix& window, int d);

struct RadiusEstimate {
  double rho = 0.0;
  double eta = 0.0;
  double p_bar = 0.0;
  bool capped = false;
};

/// Radius for the current window under `cfg.radius`. The previous estimate is
/// part of the signature for policies that look at it; the built-in ones do
/// not.
RadiusEstimate adaptive_radius(const Matrix& window,
                               const std::optional<SubspacePoint>& estimate_prev,
                               const TrackerConfig& cfg);

/// One GeRoST update. Requires cfg.mode == kGerost.
TrackerState gerost_step(TrackerState state, const Vector& u,
                         const TrackerConfig& cfg);

/// One GREAT update. Requires cfg.mode == kGreat.
TrackerState great_step(TrackerState state, const Vector& u,
                        const TrackerConfig& cfg);

/// Owns a configuration and a state; dispatches on cfg.mode.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg);
  Tracker(TrackerConfig cfg, SubspacePoint initial_estimate);

  /// Returns the step diagnostics, or nothing while the window is filling.
  const std::optional<StepDiagnostics>& step(const Vector& u);

  const TrackerConfig& config() const noexcept { return cfg_; }
  const TrackerState& state() const noexcept { return state_; }
  const std::optional<SubspacePoint>& estimate() const noexcept {
    return state_.estimate;
  }

 private:
  TrackerConfig cfg_;
  TrackerState state_;
};

/// Objective and gradient of the tracker's outer problem at `y`.
struct OuterEval {
  double F = 0.0;
  TangentVector grad;
  double lambda_star = 0.0;
  bool active = false;
  int bisection_iters = 0;
  bool degenerate = false;
};

/// GeRoST: F = d_c^2(Y, W*), grad = -2 P_Y^perp P_{W*} Y.
/// GREAT:  the same with W* replaced by the ball center.
OuterEval evaluate_outer(const SubspacePoint& y, const UncertaintyBall& ball,
                         TrackerMode mode, double eps_bis = kTol.eps_bis,
                         EigenPath path = EigenPath::kAuto);

struct FStarEstimate {
  double F_star = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

/// Estimate of min_Y F(Y) by geodesic gradient descent from `start` until
/// ||grad|| <= grad_tol or max_iters steps.
FStarEstimate fstar_oracle(const SubspacePoint& start,
                           const UncertaintyBall& ball, double alpha = 0.25,
                           double eps_bis = kTol.eps_bis,
                           double grad_tol = 1e-9, int max_iters = 10000,
                           EigenPath path = EigenPath::kAuto);

/// fstar_oracle for the ball of the tracker's latest step, started from the
/// current estimate. Requires a GeRoST tracker that has taken a step.
FStarEstimate step_fstar(const Tracker& tracker, double alpha = 0.25,
                         double grad_tol = 1e-9, int max_iters = 10000);

/// max over steps of (F_after - F*) / (F_before - F*), skipping steps with
/// F_before - F* < kTol.contraction_exclusion. Throws InsufficientDataError
/// when every step is skipped.
double contraction_estimate(const std::vector<double>& F_before,
                            const std::vector<double>& F_after,
                            const std::vector<double>& F_star);

}  // namespace gerost
