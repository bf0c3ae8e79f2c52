// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

// Tracking error, foreground detection ROC and the error-bound report.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gerost/grassmann.hpp"

namespace gerost {

/// d_c(truth, estimate).
double tracking_error(const SubspacePoint& truth, const SubspacePoint& estimate);

/// |(I - P_estimate) u|, entrywise.
Vector foreground_scores(const Vector& frame, const SubspacePoint& estimate);

struct RocCurve {
  std::vector<double> thresholds;  // descending; a pixel is positive if score >= threshold
  std::vector<double> tpr;
  std::vector<double> fpr;
  double auc = 0.0;  // trapezoid of tpr over fpr
};

/// ROC of per-pixel scores against 0/1 masks pooled over all frames.
///
/// With n_thresholds == 0 every distinct score is a threshold, so the AUC
/// equals the pairwise ordering probability with ties counted 1/2. Otherwise
/// the thresholds are n_thresholds evenly spaced quantiles of the pooled
/// scores plus +inf and -inf. Throws DegenerateError unless both classes are
/// present and DimensionError on shape mismatches.
RocCurve roc(const std::vector<Vector>& scores,
             const std::vector<std::vector<std::uint8_t>>& masks,
             int n_thresholds = 0);

/// Keeps at most `points` evenly spaced points of the curve (always the two
/// endpoints). The AUC field is carried over unchanged.
RocCurve decimate(const RocCurve& curve, int points);

/// Pairwise estimate of P(score_pos > score_neg) + P(tie) / 2.
double pairwise_auc(const std::vector<double>& scores,
                    const std::vector<std::uint8_t>& labels);

struct BoundConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
};

/// C1 = sqrt(b)/(1-sqrt(b)), C2 = 1/(1-sqrt(b)),
/// C3 = (2 sqrt(b) + sqrt(1-b))/(1-sqrt(b)), C4 = (1 + sqrt(1-b))/(1-sqrt(b)).
/// Throws DomainError unless beta in [0, 1).
BoundConstants bound_constants(double beta);

/// One tracked step as seen by the bound.
struct BoundInput {
  long t = 0;
  double d_c = 0.0;    // d_c(U_t, U_hat_t)
  double p_hat = 0.0;  // noise-to-signal estimate, in [0, 1)
  double rho = 0.0;
};

struct BoundStep {
  long t = 0;
  double d_c = 0.0;
  double transient = 0.0;  // sqrt(b)^(t - t0) d_c(t0)
  double rhs = 0.0;
  bool violated = false;
};

struct BoundReport {
  BoundConstants constants;
  double beta_hat = 0.0;
  double mu_hat = 0.0;
  double p_sup = 0.0;
  double rho_sup = 0.0;
  double dk_term = 0.0;  // sqrt(d - k)
  std::vector<BoundStep> steps;
  int violations = 0;
};

/// Right-hand side of the tracking error bound at every step, with p and rho
/// taken as their suprema over the run and t0 the first step. Throws
/// DomainError for beta_hat outside [0, 1), p_hat outside [0, 1) or
/// non-finite inputs, and InsufficientDataError for an empty history.
BoundReport bound_report(const std::vector<BoundInput>& history, double beta_hat,
                         double mu_hat, int d_minus_k);

/// Right-hand side for explicit ingredients.
double bound_rhs(const BoundConstants& c, double transient, double mu, double p,
                 double rho, double dk_term);

struct MetricRow {
  long t = 0;
  double d_c = 0.0;
  double rho_t = 0.0;
  double lambda_star = 0.0;
  double F_before = 0.0;
  double F_after = 0.0;
};

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricRow>& rows);
void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve);

/// "%.17g", which round-trips every double.
std::string format_double(double v);

}  // namespace gerost
