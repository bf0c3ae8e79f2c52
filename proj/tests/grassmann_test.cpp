// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

#include "gerost/grassmann.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gerost/errors.hpp"
#include "test_util.hpp"

namespace gerost {
namespace {

using testing::coords;
using testing::proj_gap;
using testing::random_basis;
using testing::random_point;

constexpr double kPi = std::numbers::pi;

// span(cos(phi) e1 + sin(phi) e2) in R^n.
SubspacePoint tilted_line(int n, double phi) {
  Matrix m = Matrix::Zero(n, 1);
  m(0, 0) = std::cos(phi);
  m(1, 0) = std::sin(phi);
  return SubspacePoint(m);
}

TEST(SubspacePoint, RejectsBadShapesAndNonOrthonormalColumns) {
  EXPECT_THROW(SubspacePoint(Matrix(2, 3)), DimensionError);
  EXPECT_THROW(SubspacePoint(Matrix(3, 0)), DimensionError);
  Matrix skew = coords(3, {0, 1});
  skew(0, 1) = 0.1;
  EXPECT_THROW(SubspacePoint{skew}, DomainError);
}

TEST(SubspacePoint, ProjectorIsSymmetricIdempotent) {
  Rng rng(1);
  const SubspacePoint p = random_point(rng, 12, 4);
  const Matrix P = p.projector();
  EXPECT_LE((P * P - P).norm(), 1e-12);
  EXPECT_LE((P - P.transpose()).norm(), 1e-14);
  const Matrix m = gaussian_matrix(rng, 12, 3);
  EXPECT_LE((p.project_out(m) - (Matrix::Identity(12, 12) - P) * m).norm(), 1e-12);
}

TEST(Orthonormalize, IdentityColumnsPassThrough) {
  const SubspacePoint p = orthonormalize(coords(3, {0, 1}));
  EXPECT_LE(proj_gap(p.basis(), coords(3, {0, 1})), 1e-15);
}

TEST(Orthonormalize, RemovesColumnScaling) {
  Matrix raw{{2, 0}, {0, 3}, {0, 0}};
  const SubspacePoint p = orthonormalize(raw);
  EXPECT_LE(orthonormality_error(p.basis()), 1e-15);
  EXPECT_LE(proj_gap(p.basis(), coords(3, {0, 1})), 1e-15);
}

TEST(Orthonormalize, GaussianMatchesSvdProjector) {
  Rng rng(7);
  const Matrix raw = gaussian_matrix(rng, 20, 5);
  const SubspacePoint p = orthonormalize(raw);
  EXPECT_LE(orthonormality_error(p.basis()), 1e-12);
  EXPECT_LE((p.projector() - testing::svd_projector(raw)).norm(), 1e-10);
}

TEST(Orthonormalize, RankDeficientThrows) {
  Matrix raw{{1, 2}, {1, 2}, {0, 0}};
  EXPECT_THROW(orthonormalize(raw), RankError);
}

TEST(PrincipalAngles, KnownConfigurations) {
  const SubspacePoint e1 = tilted_line(3, 0.0);
  EXPECT_NEAR(principal_angles(e1, e1).angles.at(0), 0.0, 1e-15);
  EXPECT_NEAR(principal_angles(e1, tilted_line(3, kPi / 2)).angles.at(0), kPi / 2, 1e-15);
  EXPECT_NEAR(principal_angles(e1, tilted_line(3, kPi / 4)).angles.at(0), kPi / 4, 1e-15);
}

TEST(PrincipalAngles, ResolvesTinyAngles) {
  // acos of cos(1e-9) rounds to 0; the angle must still come back.
  for (double phi : {1e-9, 1e-6, 1e-3}) {
    EXPECT_NEAR(principal_angles(tilted_line(4, 0.0), tilted_line(4, phi)).angles.at(0),
                phi, 1e-12 * phi + 1e-20);
  }
}

TEST(PrincipalAngles, MixedDimensionsAndMismatch) {
  const PrincipalAngleSet s =
      principal_angles(tilted_line(3, 0.3), SubspacePoint(coords(3, {0, 1})));
  ASSERT_EQ(s.angles.size(), 1u);
  EXPECT_NEAR(s.angles[0], 0.0, 1e-15);
  EXPECT_THROW(principal_angles(tilted_line(3, 0.0), tilted_line(4, 0.0)), DimensionError);
}

TEST(ChordalDistance, Examples) {
  const SubspacePoint e1 = tilted_line(3, 0.0);
  const SubspacePoint e2 = tilted_line(3, kPi / 2);
  const SubspacePoint e12(coords(3, {0, 1}));
  EXPECT_NEAR(chordal_distance(e1, e1), 0.0, 1e-15);
  EXPECT_NEAR(chordal_distance(e1, e2), 1.0, 1e-15);
  EXPECT_NEAR(chordal_distance(e1, e12), 1.0, 1e-15);
  EXPECT_NEAR(chordal_distance(e12, e1), 1.0, 1e-15);
}

TEST(ChordalDistance, OrthogonalAndContainedSubspaces) {
  Rng rng(3);
  const Matrix q = random_basis(rng, 16, 12);
  const SubspacePoint a(q.leftCols(5));
  const SubspacePoint b(q.middleCols(5, 5));
  const SubspacePoint c(q.leftCols(7));
  EXPECT_NEAR(chordal_distance(a, b), std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(chordal_distance(a, c), std::sqrt(2.0), 1e-12);
}

TEST(ChordalDistance, MatchesProjectorFrobeniusForEqualDims) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const SubspacePoint a = random_point(rng, 10, 3);
    const SubspacePoint b = random_point(rng, 10, 3);
    const double fro = (a.projector() - b.projector()).norm() / std::sqrt(2.0);
    EXPECT_NEAR(chordal_distance(a, b), fro, 1e-10);
    EXPECT_NEAR(projector_distance(a, b), (a.projector() - b.projector()).norm(), 1e-10);
    EXPECT_DOUBLE_EQ(chordal_distance(a, b), chordal_distance(b, a));
  }
}

TEST(ChordalDistance, TriangleInequality) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const SubspacePoint a = random_point(rng, 8, 3);
    const SubspacePoint b = random_point(rng, 8, 3);
    const SubspacePoint c = random_point(rng, 8, 3);
    EXPECT_LE(chordal_distance(a, c), chordal_distance(a, b) + chordal_distance(b, c) + 1e-9);
  }
}

TEST(TopEigenspace, Diagonal) {
  const Eigenspace e = top_eigenspace(Vector(Eigen::Vector3d(3, 2, 1)).asDiagonal(), 2);
  EXPECT_LE(proj_gap(e.basis.basis(), coords(3, {0, 1})), 1e-14);
  EXPECT_NEAR(e.gap_at_d, 1.0, 1e-14);
  EXPECT_FALSE(e.degenerate_gap);
  EXPECT_NEAR(e.eigenvalues(0), 3.0, 1e-14);
}

TEST(TopEigenspace, IdentityFlagsDegenerateGap) {
  const Eigenspace e = top_eigenspace(Matrix::Identity(5, 5), 2);
  EXPECT_NEAR(e.gap_at_d, 0.0, 1e-14);
  EXPECT_TRUE(e.degenerate_gap);
}

TEST(TopEigenspace, RecoversKnownFactors) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix q = random_basis(rng, 4, 4);
    const Matrix m = q * Vector(Eigen::Vector4d(5, 4, 1, 0)).asDiagonal() * q.transpose();
    const Eigenspace e = top_eigenspace(m, 2);
    EXPECT_LE(proj_gap(e.basis.basis(), q.leftCols(2)), 1e-10);
    EXPECT_NEAR(e.gap_at_d, 3.0, 1e-12);
  }
}

TEST(TopEigenspace, EigenvaluesDescendingAndGapNonNegative) {
  Rng rng(6);
  const Matrix g = gaussian_matrix(rng, 9, 9);
  const Eigenspace e = top_eigenspace(g + g.transpose(), 4);
  for (int i = 1; i < e.eigenvalues.size(); ++i) {
    EXPECT_GE(e.eigenvalues(i - 1), e.eigenvalues(i));
  }
  EXPECT_GE(e.gap_at_d, 0.0);
}

TEST(TopEigenspace, Errors) {
  Matrix asym = Matrix::Identity(3, 3);
  asym(0, 1) = 1.0;
  EXPECT_THROW(top_eigenspace(asym, 1), SymmetryError);
  EXPECT_THROW(top_eigenspace(Matrix::Identity(3, 3), 0), DomainError);
  EXPECT_THROW(top_eigenspace(Matrix::Identity(3, 3), 3), DomainError);
  EXPECT_THROW(top_eigenspace(Matrix(3, 2), 1), DimensionError);
}

TEST(RiemannianGradient, ProjectsOntoHorizontalSpace) {
  const SubspacePoint y(coords(2, {0}));
  Matrix g(2, 1);
  g << 1, 1;
  const TangentVector v = riemannian_gradient(y, g);
  EXPECT_NEAR(v.direction()(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(v.direction()(1, 0), 1.0, 1e-15);
  EXPECT_LE(riemannian_gradient(y, 3.0 * y.basis()).direction().norm(), 1e-15);

  Rng rng(8);
  const SubspacePoint z = random_point(rng, 10, 3);
  const TangentVector w = riemannian_gradient(z, gaussian_matrix(rng, 10, 3));
  EXPECT_LE((z.basis().transpose() * w.direction()).norm(), 1e-12);
  EXPECT_THROW(riemannian_gradient(z, Matrix(10, 2)), DimensionError);
}

TEST(TangentVector, RejectsNonHorizontalDirection) {
  const SubspacePoint y(coords(3, {0}));
  EXPECT_THROW(TangentVector(y, coords(3, {0})), DomainError);
  EXPECT_THROW(TangentVector(y, Matrix::Zero(3, 2)), DimensionError);
}

TEST(ExpMap, ZeroStepAndQuarterTurn) {
  const SubspacePoint y(coords(2, {0}));
  const TangentVector v(y, coords(2, {1}));
  EXPECT_LE(projector_distance(exp_map(v, 0.0), y), 1e-12);
  EXPECT_LE(projector_distance(exp_map(v, kPi / 2), SubspacePoint(coords(2, {1}))), 1e-12);
}

TEST(ExpMap, SmallStepMatchesFirstOrderDistance) {
  Rng rng(9);
  const SubspacePoint y = random_point(rng, 12, 3);
  const TangentVector v = riemannian_gradient(y, gaussian_matrix(rng, 12, 3));
  Eigen::JacobiSVD<Matrix> svd(v.direction());
  const double s = 1e-4;
  // sin(s sigma_i) ~ s sigma_i, so d_c ~ s ||sigma||.
  EXPECT_NEAR(chordal_distance(exp_map(v, s), y), s * svd.singularValues().norm(), 1e-6);
}

TEST(ExpMap, GeodesicAnglesAreLinearInStep) {
  // Unit direction: principal angle to the base point equals the step up to pi/2.
  Rng rng(10);
  const SubspacePoint y = random_point(rng, 7, 1);
  Matrix dir = y.project_out(gaussian_matrix(rng, 7, 1));
  dir /= dir.norm();
  const TangentVector v(y, dir);
  for (double s : {0.1, 0.7, 1.3}) {
    EXPECT_NEAR(principal_angles(exp_map(v, s), y).angles.at(0), s, 1e-12);
  }
}

TEST(ExpMap, StaysOrthonormalOverLongSteps) {
  Rng rng(13);
  const SubspacePoint y = random_point(rng, 15, 4);
  const TangentVector v = riemannian_gradient(y, gaussian_matrix(rng, 15, 4));
  for (int i = 0; i <= 20; ++i) {
    EXPECT_LE(orthonormality_error(exp_map(v, kPi * i / 20.0).basis()), 1e-12);
  }
}

TEST(SampleBallBoundary, HitsRequestedRadius) {
  Rng rng(14);
  const SubspacePoint c = random_point(rng, 10, 3);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EXPECT_NEAR(chordal_distance(sample_ball_boundary(c, 0.3, seed), c), 0.3, 1e-6);
  }
  EXPECT_LE(chordal_distance(sample_ball_boundary(c, 1e-7, 1), c), 1e-6);
}

TEST(SampleBallBoundary, SamplesAreSpread) {
  Rng rng(15);
  const SubspacePoint c = random_point(rng, 10, 3);
  std::vector<SubspacePoint> s;
  for (std::uint64_t seed = 0; seed < 10; ++seed) s.push_back(sample_ball_boundary(c, 0.3, seed));
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      EXPECT_GT(chordal_distance(s[i], s[j]), 1e-3);
    }
  }
}

TEST(SampleBallBoundary, RadiusOutOfRange) {
  const SubspacePoint c(coords(4, {0, 1}));
  EXPECT_THROW(sample_ball_boundary(c, 0.0, 1), DomainError);
  EXPECT_THROW(sample_ball_boundary(c, std::sqrt(2.0), 1), DomainError);
}

}  // namespace
}  // namespace gerost
