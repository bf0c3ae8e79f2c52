// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

#include "gerost/eval.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "gerost/errors.hpp"
#include "test_util.hpp"

namespace gerost {
namespace {

namespace fs = std::filesystem;
using testing::random_basis;
using testing::random_point;

using Frames = std::vector<Vector>;
using Masks = std::vector<std::vector<std::uint8_t>>;

// One frame holding every pixel.
std::pair<Frames, Masks> single(const std::vector<double>& s,
                                const std::vector<std::uint8_t>& l) {
  Vector v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return {Frames{v}, Masks{l}};
}

void expect_monotone(const RocCurve& c) {
  ASSERT_EQ(c.tpr.size(), c.fpr.size());
  ASSERT_EQ(c.tpr.size(), c.thresholds.size());
  EXPECT_EQ(c.tpr.front(), 0.0);
  EXPECT_EQ(c.fpr.front(), 0.0);
  EXPECT_EQ(c.tpr.back(), 1.0);
  EXPECT_EQ(c.fpr.back(), 1.0);
  for (std::size_t i = 1; i < c.tpr.size(); ++i) {
    EXPECT_GE(c.tpr[i], c.tpr[i - 1]);
    EXPECT_GE(c.fpr[i], c.fpr[i - 1]);
    EXPECT_LT(c.thresholds[i], c.thresholds[i - 1]);
  }
}

TEST(TrackingError, Examples) {
  Rng rng(1);
  const Matrix q = random_basis(rng, 20, 12);
  const SubspacePoint a(q.leftCols(5));
  EXPECT_NEAR(tracking_error(a, a), 0.0, 1e-12);
  EXPECT_NEAR(tracking_error(a, SubspacePoint(q.rightCols(5))), std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(tracking_error(a, SubspacePoint(q.leftCols(7))), std::sqrt(2.0), 1e-12);
  const SubspacePoint b = random_point(rng, 20, 5);
  EXPECT_DOUBLE_EQ(tracking_error(a, b), tracking_error(b, a));
}

TEST(ForegroundScores, BackgroundScoresZero) {
  Rng rng(2);
  const SubspacePoint u = random_point(rng, 30, 3);
  const Vector frame = u.basis() * gaussian_matrix(rng, 3, 1);
  EXPECT_LE(foreground_scores(frame, u).maxCoeff(), 1e-12);
  EXPECT_THROW(foreground_scores(Vector::Zero(29), u), DimensionError);
}

TEST(ForegroundScores, SpikeDominates) {
  Rng rng(3);
  const int n = 400, j = 17;
  const SubspacePoint u = random_point(rng, n, 3);
  const double intensity = 5.0;
  Vector frame = u.basis() * gaussian_matrix(rng, 3, 1);
  frame(j) += intensity;
  const Vector s = foreground_scores(frame, u);
  const double pjj = u.projector()(j, j);
  EXPECT_NEAR(s(j), intensity * (1.0 - pjj), 1e-10);
  Eigen::Index arg = 0;
  s.maxCoeff(&arg);
  EXPECT_EQ(arg, j);
}

TEST(ForegroundScores, BasisInvariant) {
  Rng rng(4);
  const SubspacePoint u = random_point(rng, 25, 4);
  const SubspacePoint v(u.basis() * random_basis(rng, 4, 4));
  const Vector frame = gaussian_matrix(rng, 25, 1);
  EXPECT_LE((foreground_scores(frame, u) - foreground_scores(frame, v)).cwiseAbs().maxCoeff(),
            1e-10);
}

TEST(Roc, PerfectSeparation) {
  auto [s, m] = single({0.1, 0.2, 0.3, 0.9, 1.0}, {0, 0, 0, 1, 1});
  const RocCurve c = roc(s, m);
  EXPECT_DOUBLE_EQ(c.auc, 1.0);
  expect_monotone(c);
  EXPECT_TRUE(std::isinf(c.thresholds.front()));
}

TEST(Roc, InvertedLabels) {
  auto [s, m] = single({0.1, 0.2, 0.3, 0.9, 1.0}, {1, 1, 1, 0, 0});
  EXPECT_DOUBLE_EQ(roc(s, m).auc, 0.0);
}

TEST(Roc, ChanceLevelOnRandomScores) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution coin(0.3);
  Frames s;
  Masks m;
  for (int f = 0; f < 100; ++f) {
    Vector v(1000);
    std::vector<std::uint8_t> l(1000);
    for (int i = 0; i < 1000; ++i) {
      v(i) = u(rng);
      l[i] = coin(rng);
    }
    s.push_back(v);
    m.push_back(l);
  }
  const RocCurve c = roc(s, m);
  EXPECT_GE(c.auc, 0.45);
  EXPECT_LE(c.auc, 0.55);
  expect_monotone(c);
  const RocCurve grid = roc(s, m, 256);
  EXPECT_LE(grid.thresholds.size(), 258u);
  EXPECT_NEAR(grid.auc, c.auc, 5e-3);
  expect_monotone(grid);
}

TEST(Roc, MatchesPairwiseOracleWithTies) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> level(0, 40);
  std::bernoulli_distribution coin(0.2);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
    for (int i = 0; i < 4000; ++i) {
      labels.push_back(coin(rng));
      // Coarse levels force ties; positives drift upward.
      scores.push_back(level(rng) * 0.25 + (labels.back() ? 1.5 : 0.0));
    }
    auto [s, m] = single(scores, labels);
    EXPECT_NEAR(roc(s, m).auc, pairwise_auc(scores, labels), 1e-12);
    EXPECT_NEAR(roc(s, m, 256).auc, pairwise_auc(scores, labels), 2e-3);
  }
}

TEST(Roc, Errors) {
  auto [s, m] = single({0.1, 0.2}, {1, 1});
  EXPECT_THROW(roc(s, m), DegenerateError);
  auto [s2, m2] = single({0.1, 0.2}, {1, 0});
  m2[0].push_back(0);
  EXPECT_THROW(roc(s2, m2), DimensionError);
  EXPECT_THROW(pairwise_auc({1.0}, {1}), DegenerateError);
}

TEST(Roc, DecimateKeepsEndpointsAndAuc) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  for (int i = 0; i < 3000; ++i) {
    labels.push_back(i % 4 == 0);
    scores.push_back(g(rng) + (labels.back() ? 1.0 : 0.0));
  }
  auto [s, m] = single(scores, labels);
  const RocCurve full = roc(s, m);
  const RocCurve small = decimate(full, 50);
  EXPECT_EQ(small.thresholds.size(), 50u);
  EXPECT_EQ(small.auc, full.auc);
  expect_monotone(small);
  EXPECT_THROW(decimate(full, 1), DomainError);
}

TEST(BoundConstants, AtZeroBeta) {
  const BoundConstants c = bound_constants(0.0);
  EXPECT_EQ(c.c1, 0.0);
  EXPECT_EQ(c.c2, 1.0);
  EXPECT_EQ(c.c3, 1.0);
  EXPECT_EQ(c.c4, 2.0);
  EXPECT_THROW(bound_constants(1.0), DomainError);
  EXPECT_THROW(bound_constants(-0.1), DomainError);
}

TEST(BoundConstants, QuarterBeta) {
  // sqrt(b) = 0.5, sqrt(1 - b) = sqrt(3)/2.
  const BoundConstants c = bound_constants(0.25);
  EXPECT_NEAR(c.c1, 1.0, 1e-15);
  EXPECT_NEAR(c.c2, 2.0, 1e-15);
  EXPECT_NEAR(c.c3, 2.0 * (1.0 + std::sqrt(3.0) / 2.0), 1e-14);
  EXPECT_NEAR(c.c4, 2.0 * (1.0 + std::sqrt(3.0) / 2.0), 1e-14);
}

TEST(BoundRhs, MonotoneInEachIngredient) {
  const BoundConstants c = bound_constants(0.4);
  const double base = bound_rhs(c, 0.1, 0.02, 0.1, 0.2, 1.0);
  EXPECT_GE(bound_rhs(c, 0.1, 0.05, 0.1, 0.2, 1.0), base);
  EXPECT_GE(bound_rhs(c, 0.1, 0.02, 0.3, 0.2, 1.0), base);
  EXPECT_GE(bound_rhs(c, 0.1, 0.02, 0.1, 0.5, 1.0), base);
  EXPECT_GE(bound_rhs(c, 0.1, 0.02, 0.1, 0.2, 2.0), base);
}

TEST(BoundReport, IdealRunHasNoViolations) {
  std::vector<BoundInput> h;
  const double beta = 0.36;
  for (long t = 10; t < 40; ++t) {
    h.push_back(BoundInput{t, 0.5 * std::pow(0.6, t - 10.0), 0.0, 1e-6});
  }
  const BoundReport r = bound_report(h, beta, 0.0, 0);
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.steps.size(), h.size());
  EXPECT_NEAR(r.steps[5].transient, 0.5 * std::pow(0.6, 5), 1e-15);
  EXPECT_NEAR(r.steps[5].rhs - r.steps[5].transient, r.constants.c3 * 1e-6, 1e-15);
}

TEST(BoundReport, FlagsSlowerDecay) {
  std::vector<BoundInput> h;
  for (long t = 0; t < 20; ++t) h.push_back(BoundInput{t, 0.5 * std::pow(0.9, t), 0.0, 0.0});
  const BoundReport r = bound_report(h, 0.25, 0.0, 0);
  EXPECT_GT(r.violations, 0);
  EXPECT_FALSE(r.steps.front().violated);
}

TEST(BoundReport, Errors) {
  EXPECT_THROW(bound_report({}, 0.5, 0.0, 0), InsufficientDataError);
  EXPECT_THROW(bound_report({{1, 0.1, 1.0, 0.1}}, 0.5, 0.0, 0), DomainError);
  EXPECT_THROW(bound_report({{1, 0.1, 0.1, 0.1}}, 1.0, 0.0, 0), DomainError);
  EXPECT_THROW(bound_report({{1, 0.1, 0.1, 0.1}}, 0.5, -1.0, 0), DomainError);
}

TEST(Csv, MetricsAndRocFormats) {
  const fs::path dir = fs::temp_directory_path() / "gerost_eval_csv";
  fs::create_directories(dir);
  write_metrics_csv(dir / "m.csv", {MetricRow{3, 0.1, 0.25, 2.5, 1.0, 0.5}});
  write_roc_csv(dir / "r.csv", RocCurve{{1.0, 0.5}, {0.0, 1.0}, {0.0, 1.0}, 1.0});
  std::stringstream m, r;
  m << std::ifstream(dir / "m.csv").rdbuf();
  r << std::ifstream(dir / "r.csv").rdbuf();
  EXPECT_EQ(m.str(),
            "t,d_c,rho_t,lambda_star,F_before,F_after\n"
            "3,0.10000000000000001,0.25,2.5,1,0.5\n");
  EXPECT_EQ(r.str(), "fpr,tpr,threshold\n0,0,1\n1,1,0.5\n");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::strtod(format_double(1.0 / 3.0).c_str(), nullptr), 1.0 / 3.0);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace gerost
