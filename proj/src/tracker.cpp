// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

#include "gerost/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gerost/errors.hpp"
#include "gerost/random.hpp"

namespace gerost {

void TrackerConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (n < 2) fail("tracker: n must be at least 2");
  if (k < 1) fail("tracker: k must be at least 1");
  if (k > d) fail("tracker: need k <= d");
  if (k + d > n) fail("tracker: need k + d <= n");
  if (T < d) fail("tracker: window length T must be >= d");
  if (K < 1) fail("tracker: K must be at least 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail("tracker: alpha must be > 0");
  if (!(eps_bis > 0.0)) fail("tracker: eps_bis must be > 0");

  const double sqrt_k = std::sqrt(static_cast<double>(k));
  if (const auto* fixed = std::get_if<FixedRadius>(&radius)) {
    if (!(fixed->rho > 0.0) || !(fixed->rho < sqrt_k)) {
      fail("tracker: fixed radius must lie in (0, sqrt(k))");
    }
  } else {
    const auto& a = std::get<AdaptiveRadius>(radius);
    if (!(a.sigma_lower > 0.0)) fail("tracker: sigma_lower must be > 0");
    if (!(a.mu_est >= 0.0) || !(a.eps_est >= 0.0)) {
      fail("tracker: mu_est and eps_est must be >= 0");
    }
    if (!(a.p_cap >= 0.0) || !(a.p_cap < 1.0)) {
      fail("tracker: p_cap must lie in [0, 1)");
    }
  }
}

SampleWindow::SampleWindow(int n, int capacity) : buffer_(n, capacity) {
  buffer_.setZero();
}

void SampleWindow::push(const Vector& u) {
  if (u.size() != buffer_.rows()) {
    throw DimensionError("sample has length " + std::to_string(u.size()) +
                         ", expected " + std::to_string(buffer_.rows()));
  }
  buffer_.col(head_) = u;
  head_ = (head_ + 1) % capacity();
  count_ = std::min(count_ + 1, capacity());
}

Matrix SampleWindow::ordered() const {
  Matrix out(buffer_.rows(), count_);
  const int first = count_ < capacity() ? 0 : head_;
  for (int j = 0; j < count_; ++j) {
    out.col(j) = buffer_.col((first + j) % capacity());
  }
  return out;
}

TrackerState::TrackerState(const TrackerConfig& cfg) : window(cfg.n, cfg.T) {}

NominalSubspace nominal_subspace(const Matrix& window, int d) {
  const int n = static_cast<int>(window.rows());
  if (d < 1 || d >= n) {
    throw DimensionError("nominal dimension d=" + std::to_string(d) +
                         " out of range for n=" + std::to_string(n));
  }
  if (window.cols() < 1) throw DimensionError("empty window");

  Eigen::JacobiSVD<Matrix> svd(window, Eigen::ComputeThinU);
  const Vector sv = svd.singularValues();
  const double cutoff = kTol.rank * (sv.size() > 0 ? sv(0) : 0.0);
  int significant = 0;
  while (significant < sv.size() && significant < d && sv(significant) > cutoff &&
         sv(significant) > 0.0) {
    ++significant;
  }

  Matrix basis(n, d);
  basis.leftCols(significant) = svd.matrixU().leftCols(significant);
  int filled = significant;
  for (int j = 0; j < n && filled < d; ++j) {
    Vector e = Vector::Unit(n, j);
    for (int pass = 0; pass < 2; ++pass) {
      e -= basis.leftCols(filled) * (basis.leftCols(filled).transpose() * e);
    }
    const double norm = e.norm();
    if (norm > 0.5) basis.col(filled++) = e / norm;
  }
  return NominalSubspace{orthonormalize(basis), sv, significant < d};
}

RadiusEstimate adaptive_radius(const Matrix& window,
                               const std::optional<SubspacePoint>& /*estimate_prev*/,
                               const TrackerConfig& cfg) {
  if (const auto* fixed = std::get_if<FixedRadius>(&cfg.radius)) {
    return RadiusEstimate{fixed->rho, 0.0, 0.0, false};
  }
  const auto& a = std::get<AdaptiveRadius>(cfg.radius);
  if (!(a.sigma_lower > 0.0)) throw ConfigError("sigma_lower must be > 0");

  const Eigen::Index T = window.cols();
  double weighted = 0.0;  // ||W D||_F^2
  for (Eigen::Index j = 0; j < T; ++j) {
    const double w = static_cast<double>(T - 1 - j);
    weighted += w * w * window.col(j).squaredNorm();
  }
  const double t = static_cast<double>(T);
  const double eta = a.mu_est * std::sqrt(weighted) +
                     a.eps_est * std::sqrt(t) * (a.mu_est * (t - 1.0) + 1.0);

  RadiusEstimate out;
  out.eta = eta;
  const double raw = eta / a.sigma_lower;
  out.capped = raw > a.p_cap;
  out.p_bar = std::min(raw, a.p_cap);
  if (!(out.p_bar < 1.0)) {
    throw ConfigError("noise-to-signal estimate reached 1; p_cap must be < 1");
  }
  double rho = std::sqrt(2.0) * out.p_bar / (1.0 - out.p_bar);
  if (a.include_dk_term) rho += std::sqrt(static_cast<double>(cfg.d - cfg.k));
  const double upper = std::sqrt(static_cast<double>(cfg.k)) - kTol.rho_margin;
  out.rho = std::clamp(rho, kTol.rho_floor, upper);
  return out;
}

OuterEval evaluate_outer(const SubspacePoint& y, const UncertaintyBall& ball,
                         TrackerMode mode, double eps_bis, EigenPath path) {
  if (mode == TrackerMode::kGreat) {
    return OuterEval{subspace_cost(y, ball.center()),
                     cost_gradient(y, ball.center()), 0.0, false, 0, false};
  }
  WorstCaseSolution wc = worst_case(y, ball, eps_bis, path);
  return OuterEval{wc.objective,      cost_gradient(y, wc.maximizer),
                   wc.lambda_star,    wc.active,
                   wc.bisection_iters, wc.degenerate};
}

namespace {

SubspacePoint descend(const TangentVector& grad, double alpha) {
  return exp_map(TangentVector(grad.at(), -grad.direction()), alpha);
}

TrackerState advance(TrackerState state, const Vector& u,
                     const TrackerConfig& cfg) {
  if (u.size() != cfg.n) {
    throw DimensionError("sample has length " + std::to_string(u.size()) +
                         ", tracker expects " + std::to_string(cfg.n));
  }
  state.window.push(u);
  ++state.t;
  state.last_diag.reset();
  if (!state.window.full()) return state;

  const Matrix window = state.window.ordered();
  NominalSubspace nominal = nominal_subspace(window, cfg.d);

  if (!state.estimate) {
    if (cfg.init == InitPolicy::kTopK) {
      state.estimate = orthonormalize(nominal.subspace.basis().leftCols(cfg.k));
    } else {
      Rng rng(mix64(cfg.init_seed));
      const Matrix mix = gaussian_matrix(rng, cfg.d, cfg.k);
      state.estimate = orthonormalize(nominal.subspace.basis() * mix);
    }
    return state;
  }

  const RadiusEstimate radius = adaptive_radius(window, state.estimate, cfg);
  const bool robust = cfg.mode == TrackerMode::kGerost;
  const UncertaintyBall ball(nominal.subspace, robust ? radius.rho : 1.0);

  StepDiagnostics diag;
  diag.t = state.t;
  diag.rho_t = robust ? radius.rho : 0.0;
  diag.p_bar_t = radius.p_bar;
  diag.eta_t = radius.eta;
  diag.radius_capped = radius.capped;
  diag.nominal_degenerate = nominal.degenerate;

  SubspacePoint y = *state.estimate;
  for (int i = 0; i < cfg.K; ++i) {
    const OuterEval ev = evaluate_outer(y, ball, cfg.mode, cfg.eps_bis, cfg.eigen_path);
    diag.F_trace.push_back(ev.F);
    diag.grad_norms.push_back(ev.grad.direction().norm());
    diag.bisection_iters += ev.bisection_iters;
    diag.eigen_degenerate = diag.eigen_degenerate || ev.degenerate;
    y = descend(ev.grad, cfg.alpha);
  }
  const OuterEval last = evaluate_outer(y, ball, cfg.mode, cfg.eps_bis, cfg.eigen_path);
  diag.F_trace.push_back(last.F);
  diag.F_before = diag.F_trace.front();
  diag.F_after = last.F;
  diag.lambda_star = last.lambda_star;
  diag.lambda_active = last.active;

  state.estimate = std::move(y);
  state.last_diag = std::move(diag);
  return state;
}

}  // namespace

TrackerState gerost_step(TrackerState state, const Vector& u,
                         const TrackerConfig& cfg) {
  if (cfg.mode != TrackerMode::kGerost) {
    throw ConfigError("gerost_step called with a non-GeRoST configuration");
  }
  return advance(std::move(state), u, cfg);
}

TrackerState great_step(TrackerState state, const Vector& u,
                        const TrackerConfig& cfg) {
  if (cfg.mode != TrackerMode::kGreat) {
    throw ConfigError("great_step called with a non-GREAT configuration");
  }
  return advance(std::move(state), u, cfg);
}

Tracker::Tracker(TrackerConfig cfg) : cfg_(std::move(cfg)), state_(cfg_) {
  cfg_.validate();
}

Tracker::Tracker(TrackerConfig cfg, SubspacePoint initial_estimate)
    : Tracker(std::move(cfg)) {
  if (initial_estimate.ambient_dim() != cfg_.n ||
      initial_estimate.sub_dim() != cfg_.k) {
    throw DimensionError("initial estimate must be " + std::to_string(cfg_.n) +
                         " x " + std::to_string(cfg_.k));
  }
  state_.estimate = std::move(initial_estimate);
}

const std::optional<StepDiagnostics>& Tracker::step(const Vector& u) {
  state_ = cfg_.mode == TrackerMode::kGerost
               ? gerost_step(std::move(state_), u, cfg_)
               : great_step(std::move(state_), u, cfg_);
  return state_.last_diag;
}

FStarEstimate fstar_oracle(const SubspacePoint& start,
                           const UncertaintyBall& ball, double alpha,
                           double eps_bis, double grad_tol, int max_iters,
                           EigenPath path) {
  FStarEstimate out;
  out.F_star = std::numeric_limits<double>::infinity();
  SubspacePoint y = start;
  for (int it = 0; it <= max_iters; ++it) {
    const OuterEval ev = evaluate_outer(y, ball, TrackerMode::kGerost, eps_bis, path);
    out.F_star = std::min(out.F_star, ev.F);
    out.grad_norm = ev.grad.direction().norm();
    out.iterations = it;
    if (out.grad_norm <= grad_tol) {
      out.converged = true;
      break;
    }
    if (it == max_iters) break;
    y = descend(ev.grad, alpha);
  }
  return out;
}

FStarEstimate step_fstar(const Tracker& tracker, double alpha,
                         double grad_tol, int max_iters) {
  const TrackerConfig& cfg = tracker.config();
  const auto& diag = tracker.state().last_diag;
  if (cfg.mode != TrackerMode::kGerost || !diag || !tracker.estimate()) {
    throw InsufficientDataError("step_fstar needs a GeRoST tracker after a step");
  }
  const NominalSubspace nominal =
      nominal_subspace(tracker.state().window.ordered(), cfg.d);
  const UncertaintyBall ball(nominal.subspace, diag->rho_t);
  return fstar_oracle(*tracker.estimate(), ball, alpha, cfg.eps_bis,
                      grad_tol, max_iters, cfg.eigen_path);
}

double contraction_estimate(const std::vector<double>& F_before,
                            const std::vector<double>& F_after,
                            const std::vector<double>& F_star) {
  if (F_before.size() != F_after.size() || F_before.size() != F_star.size()) {
    throw DimensionError("contraction_estimate: trace lengths differ");
  }
  double beta = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < F_before.size(); ++i) {
    const double gap = F_before[i] - F_star[i];
    if (!(gap >= kTol.contraction_exclusion)) continue;
    beta = std::max(beta, (F_after[i] - F_star[i]) / gap);
    any = true;
  }
  if (!any) {
    throw InsufficientDataError(
        "contraction_estimate: no step has a usable suboptimality gap");
  }
  return beta;
}

}  // namespace gerost
