// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

// Grassmann and Stiefel manifold primitives.
//
// A point of Gr(k, n) is carried as an orthonormal n x k basis. Bases are not
// unique, so every comparison between subspaces in this library goes through
// projectors or the chordal distance, never through basis entries.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace gerost {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A k-dimensional linear subspace of R^n, held as an orthonormal basis.
class SubspacePoint {
 public:
  /// Wraps an n x k matrix whose columns must already be orthonormal
  /// (deviation of U^T U from I at most kTol.orthonormality). Throws
  /// DimensionError for an empty or wide matrix and DomainError when the
  /// columns are not orthonormal.
  explicit SubspacePoint(Matrix basis);

  const Matrix& basis() const noexcept { return basis_; }
  int ambient_dim() const noexcept { return static_cast<int>(basis_.rows()); }
  int sub_dim() const noexcept { return static_cast<int>(basis_.cols()); }

  /// P = U U^T, formed on demand (n x n).
  Matrix projector() const;

  /// (I - U U^T) M without forming the projector.
  Matrix project_out(const Matrix& m) const;

 private:
  Matrix basis_;
};

/// Principal angles, ascending, each in [0, pi/2].
struct PrincipalAngleSet {
  std::vector<double> angles;
  int dim_a = 0;
  int dim_b = 0;
};

/// A horizontal tangent vector at a Grassmann point (at^T direction = 0).
class TangentVector {
 public:
  TangentVector(SubspacePoint at, Matrix direction);

  const SubspacePoint& at() const noexcept { return at_; }
  const Matrix& direction() const noexcept { return direction_; }

 private:
  SubspacePoint at_;
  Matrix direction_;
};

/// Top-d eigenspace of a symmetric matrix together with its full spectrum.
struct Eigenspace {
  SubspacePoint basis;
  Vector eigenvalues;  // descending
  double gap_at_d = 0.0;
  bool degenerate_gap = false;
};

/// Orthonormal basis for the column space of `raw` (Householder QR with the
/// signs fixed so that R has a positive diagonal). Throws RankError when the
/// numerical rank is below the column count.
SubspacePoint orthonormalize(const Matrix& raw);

PrincipalAngleSet principal_angles(const SubspacePoint& a,
                                   const SubspacePoint& b);

/// (|k - d| + sum sin^2 theta_i)^{1/2}; dimensions may differ.
///
/// Evaluated as |k - d| + ||(I - P_L) S||_F^2 with S the lower-dimensional
/// basis and L the other one, which keeps full relative accuracy for nearby
/// subspaces where 1 - cos^2 would cancel.
double chordal_distance(const SubspacePoint& a, const SubspacePoint& b);

/// ||P_a - P_b||_F, the basis-free comparison used throughout the tests.
double projector_distance(const SubspacePoint& a, const SubspacePoint& b);

/// Top-d eigenspace of the symmetric matrix `m` (1 <= d <= n - 1).
/// Throws SymmetryError for an asymmetric input. A gap below
/// kTol.degenerate_gap is reported through `degenerate_gap`, not thrown.
Eigenspace top_eigenspace(const Matrix& m, int d);

/// (I - Y Y^T) euclid_grad.
TangentVector riemannian_gradient(const SubspacePoint& y,
                                  const Matrix& euclid_grad);

/// Geodesic from v.at() along v.direction(), evaluated at `step`.
/// With direction = Q S V^T (thin SVD) the basis is
///   Y V cos(step S) V^T + Q sin(step S) V^T,
/// re-orthonormalized afterwards.
SubspacePoint exp_map(const TangentVector& v, double step);

/// A random point at chordal distance `radius` from `center`, obtained by
/// walking along a random geodesic and solving for the step length.
/// Requires 0 < radius < sqrt(center.sub_dim()).
SubspacePoint sample_ball_boundary(const SubspacePoint& center, double radius,
                                   std::uint64_t seed);

/// ||U^T U - I||_F.
double orthonormality_error(const Matrix& basis);

}  // namespace gerost
