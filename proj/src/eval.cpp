// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

#include "gerost/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "gerost/errors.hpp"

namespace gerost {

double tracking_error(const SubspacePoint& truth, const SubspacePoint& estimate) {
  return chordal_distance(truth, estimate);
}

Vector foreground_scores(const Vector& frame, const SubspacePoint& estimate) {
  if (frame.size() != estimate.ambient_dim()) {
    throw DimensionError("frame has length " + std::to_string(frame.size()) +
                         ", estimate lives in R^" +
                         std::to_string(estimate.ambient_dim()));
  }
  return estimate.project_out(frame).col(0).cwiseAbs();
}

namespace {

struct Pooled {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  long positives = 0;
  long negatives = 0;
};

Pooled pool(const std::vector<Vector>& scores,
            const std::vector<std::vector<std::uint8_t>>& masks) {
  if (scores.size() != masks.size()) {
    throw DimensionError("roc: " + std::to_string(scores.size()) +
                         " score frames but " + std::to_string(masks.size()) +
                         " masks");
  }
  Pooled p;
  for (std::size_t f = 0; f < scores.size(); ++f) {
    if (static_cast<std::size_t>(scores[f].size()) != masks[f].size()) {
      throw DimensionError("roc: frame " + std::to_string(f) +
                           " score and mask lengths differ");
    }
    for (Eigen::Index j = 0; j < scores[f].size(); ++j) {
      const double s = scores[f](j);
      if (std::isnan(s)) throw DomainError("roc: NaN score");
      p.scores.push_back(s);
      const std::uint8_t label = masks[f][j] != 0 ? 1 : 0;
      p.labels.push_back(label);
      (label ? p.positives : p.negatives) += 1;
    }
  }
  if (p.positives == 0 || p.negatives == 0) {
    throw DegenerateError("roc needs at least one positive and one negative pixel");
  }
  return p;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double area = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    area += (x[i] - x[i - 1]) * (y[i] + y[i - 1]) * 0.5;
  }
  return area;
}

}  // namespace

RocCurve roc(const std::vector<Vector>& scores,
             const std::vector<std::vector<std::uint8_t>>& masks,
             int n_thresholds) {
  if (n_thresholds < 0) throw DomainError("n_thresholds must be >= 0");
  const Pooled p = pool(scores, masks);
  const double pos = static_cast<double>(p.positives);
  const double neg = static_cast<double>(p.negatives);
  const double inf = std::numeric_limits<double>::infinity();

  RocCurve curve;
  if (n_thresholds == 0) {
    std::vector<std::size_t> order(p.scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return p.scores[a] > p.scores[b];
    });
    curve.thresholds.push_back(inf);
    curve.tpr.push_back(0.0);
    curve.fpr.push_back(0.0);
    long tp = 0;
    long fp = 0;
    for (std::size_t i = 0; i < order.size();) {
      const double s = p.scores[order[i]];
      while (i < order.size() && p.scores[order[i]] == s) {
        (p.labels[order[i]] ? tp : fp) += 1;
        ++i;
      }
      curve.thresholds.push_back(s);
      curve.tpr.push_back(static_cast<double>(tp) / pos);
      curve.fpr.push_back(static_cast<double>(fp) / neg);
    }
  } else {
    std::vector<double> pos_scores;
    std::vector<double> neg_scores;
    for (std::size_t i = 0; i < p.scores.size(); ++i) {
      (p.labels[i] ? pos_scores : neg_scores).push_back(p.scores[i]);
    }
    std::sort(pos_scores.begin(), pos_scores.end());
    std::sort(neg_scores.begin(), neg_scores.end());
    std::vector<double> all = p.scores;
    std::sort(all.begin(), all.end());

    std::vector<double> grid{inf};
    for (int i = n_thresholds - 1; i >= 0; --i) {
      const double q = n_thresholds == 1
                           ? 0.0
                           : static_cast<double>(i) / (n_thresholds - 1);
      const auto idx = static_cast<std::size_t>(
          std::llround(q * static_cast<double>(all.size() - 1)));
      if (all[idx] != grid.back()) grid.push_back(all[idx]);
    }
    grid.push_back(-inf);
    auto at_least = [](const std::vector<double>& sorted, double thr) {
      return static_cast<double>(
          sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), thr));
    };
    for (double thr : grid) {
      curve.thresholds.push_back(thr);
      curve.tpr.push_back(at_least(pos_scores, thr) / pos);
      curve.fpr.push_back(at_least(neg_scores, thr) / neg);
    }
  }
  curve.auc = trapezoid(curve.fpr, curve.tpr);
  return curve;
}

RocCurve decimate(const RocCurve& curve, int points) {
  if (points < 2) throw DomainError("decimate needs at least 2 points");
  const std::size_t size = curve.thresholds.size();
  if (size <= static_cast<std::size_t>(points)) return curve;
  RocCurve out;
  out.auc = curve.auc;
  std::size_t last = size;  // sentinel: nothing taken yet
  for (int i = 0; i < points; ++i) {
    const auto idx = static_cast<std::size_t>(std::llround(
        static_cast<double>(i) * static_cast<double>(size - 1) / (points - 1)));
    if (idx == last) continue;
    out.thresholds.push_back(curve.thresholds[idx]);
    out.tpr.push_back(curve.tpr[idx]);
    out.fpr.push_back(curve.fpr[idx]);
    last = idx;
  }
  return out;
}

double pairwise_auc(const std::vector<double>& scores,
                    const std::vector<std::uint8_t>& labels) {
  if (scores.size() != labels.size()) {
    throw DimensionError("pairwise_auc: scores and labels differ in length");
  }
  double wins = 0.0;
  long pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  if (pairs == 0) {
    throw DegenerateError("pairwise_auc needs both classes");
  }
  return wins / static_cast<double>(pairs);
}

BoundConstants bound_constants(double beta) {
  if (!(beta >= 0.0) || !(beta < 1.0)) {
    throw DomainError("contraction factor must lie in [0, 1), got " +
                      format_double(beta));
  }
  const double sb = std::sqrt(beta);
  const double sc = std::sqrt(1.0 - beta);
  const double denom = 1.0 - sb;
  return BoundConstants{sb / denom, 1.0 / denom, (2.0 * sb + sc) / denom,
                        (1.0 + sc) / denom};
}

double bound_rhs(const BoundConstants& c, double transient, double mu, double p,
                 double rho, double dk_term) {
  return transient + c.c1 * mu + c.c2 * (std::sqrt(2.0) * p / (1.0 - p)) +
         c.c3 * rho + c.c4 * dk_term;
}

BoundReport bound_report(const std::vector<BoundInput>& history, double beta_hat,
                         double mu_hat, int d_minus_k) {
  if (history.empty()) {
    throw InsufficientDataError("bound_report needs at least one step");
  }
  if (!(mu_hat >= 0.0) || !std::isfinite(mu_hat)) {
    throw DomainError("mu_hat must be finite and non-negative");
  }
  if (d_minus_k < 0) throw DomainError("d - k must be non-negative");

  BoundReport r;
  r.constants = bound_constants(beta_hat);
  r.beta_hat = beta_hat;
  r.mu_hat = mu_hat;
  r.dk_term = std::sqrt(static_cast<double>(d_minus_k));
  for (const BoundInput& in : history) {
    if (!(in.p_hat >= 0.0) || !(in.p_hat < 1.0)) {
      throw DomainError("p_hat must lie in [0, 1) at t=" + std::to_string(in.t));
    }
    if (!std::isfinite(in.rho) || !std::isfinite(in.d_c) || in.rho < 0.0) {
      throw DomainError("non-finite bound input at t=" + std::to_string(in.t));
    }
    r.p_sup = std::max(r.p_sup, in.p_hat);
    r.rho_sup = std::max(r.rho_sup, in.rho);
  }

  const long t0 = history.front().t;
  const double d0 = history.front().d_c;
  const double sb = std::sqrt(beta_hat);
  for (const BoundInput& in : history) {
    BoundStep s;
    s.t = in.t;
    s.d_c = in.d_c;
    s.transient = std::pow(sb, static_cast<double>(in.t - t0)) * d0;
    s.rhs = bound_rhs(r.constants, s.transient, mu_hat, r.p_sup, r.rho_sup,
                      r.dk_term);
    s.violated = s.d_c > s.rhs;
    r.violations += s.violated ? 1 : 0;
    r.steps.push_back(s);
  }
  return r;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricRow>& rows) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << "t,d_c,rho_t,lambda_star,F_before,F_after\n";
  for (const MetricRow& r : rows) {
    os << r.t << ',' << format_double(r.d_c) << ',' << format_double(r.rho_t)
       << ',' << format_double(r.lambda_star) << ','
       << format_double(r.F_before) << ',' << format_double(r.F_after) << '\n';
  }
  if (!os) throw IoError("write failed for " + path.string());
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << "fpr,tpr,threshold\n";
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    os << format_double(curve.fpr[i]) << ',' << format_double(curve.tpr[i])
       << ',' << format_double(curve.thresholds[i]) << '\n';
  }
  if (!os) throw IoError("write failed for " + path.string());
}

}  // namespace gerost
