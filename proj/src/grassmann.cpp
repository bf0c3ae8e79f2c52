// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

#include "gerost/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gerost/errors.hpp"
#include "gerost/random.hpp"
#include "gerost/tolerances.hpp"

namespace gerost {

namespace {

std::string shape(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void require_same_ambient(const SubspacePoint& a, const SubspacePoint& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionError("ambient dimension mismatch: " +
                         std::to_string(a.ambient_dim()) + " vs " +
                         std::to_string(b.ambient_dim()));
  }
}

// Residual of the lower-dimensional basis after projecting onto the other.
// Its squared Frobenius norm is sum_i sin^2 theta_i.
Matrix cross_residual(const SubspacePoint& a, const SubspacePoint& b) {
  const bool a_small = a.sub_dim() <= b.sub_dim();
  const Matrix& s = a_small ? a.basis() : b.basis();
  const Matrix& l = a_small ? b.basis() : a.basis();
  return s - l * (l.transpose() * s);
}

}  // namespace

double orthonormality_error(const Matrix& basis) {
  const Matrix gram = basis.transpose() * basis;
  return (gram - Matrix::Identity(basis.cols(), basis.cols())).norm();
}

SubspacePoint::SubspacePoint(Matrix basis) : basis_(std::move(basis)) {
  if (basis_.cols() < 1 || basis_.cols() > basis_.rows()) {
    throw DimensionError("subspace basis must be n x k with 1 <= k <= n, got " +
                         shape(basis_));
  }
  const double err = orthonormality_error(basis_);
  if (!(err <= kTol.orthonormality)) {
    std::ostringstream os;
    os << "basis columns are not orthonormal (||U^T U - I||_F = " << err << ")";
    throw DomainError(os.str());
  }
}

Matrix SubspacePoint::projector() const { return basis_ * basis_.transpose(); }

Matrix SubspacePoint::project_out(const Matrix& m) const {
  if (m.rows() != basis_.rows()) {
    throw DimensionError("cannot project " + shape(m) + " against basis " +
                         shape(basis_));
  }
  return m - basis_ * (basis_.transpose() * m);
}

TangentVector::TangentVector(SubspacePoint at, Matrix direction)
    : at_(std::move(at)), direction_(std::move(direction)) {
  if (direction_.rows() != at_.basis().rows() ||
      direction_.cols() != at_.basis().cols()) {
    throw DimensionError("tangent direction " + shape(direction_) +
                         " does not match base point " + shape(at_.basis()));
  }
  const double off = (at_.basis().transpose() * direction_).norm();
  if (!(off <= kTol.horizontality * std::max(1.0, direction_.norm()))) {
    throw DomainError("tangent direction is not horizontal");
  }
}

SubspacePoint orthonormalize(const Matrix& raw) {
  const Eigen::Index n = raw.rows();
  const Eigen::Index k = raw.cols();
  if (k < 1 || k > n) {
    throw DimensionError("orthonormalize expects n x k with 1 <= k <= n, got " +
                         shape(raw));
  }
  Eigen::ColPivHouseholderQR<Matrix> pivoted(raw);
  pivoted.setThreshold(kTol.rank);
  if (pivoted.rank() < k) {
    throw RankError("matrix " + shape(raw) + " has numerical rank " +
                    std::to_string(pivoted.rank()) + " < " + std::to_string(k));
  }
  Eigen::HouseholderQR<Matrix> qr(raw);
  Matrix q = qr.householderQ() * Matrix::Identity(n, k);
  const auto r = qr.matrixQR().diagonal();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (r(j) < 0.0) q.col(j) *= -1.0;
  }
  return SubspacePoint(std::move(q));
}

PrincipalAngleSet principal_angles(const SubspacePoint& a,
                                   const SubspacePoint& b) {
  require_same_ambient(a, b);
  const bool a_small = a.sub_dim() <= b.sub_dim();
  const Matrix& s = a_small ? a.basis() : b.basis();
  const Matrix& l = a_small ? b.basis() : a.basis();

  const Matrix cross = l.transpose() * s;
  const Vector cosines = Eigen::JacobiSVD<Matrix>(cross).singularValues();
  const Vector sines =
      Eigen::JacobiSVD<Matrix>(s - l * cross).singularValues();

  // Cosines descend while sines descend for the reverse ordering of angles.
  const Eigen::Index m = s.cols();
  PrincipalAngleSet out;
  out.dim_a = a.sub_dim();
  out.dim_b = b.sub_dim();
  out.angles.reserve(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double c = std::clamp(cosines(i), 0.0, 1.0);
    const double sn = std::clamp(sines(m - 1 - i), 0.0, 1.0);
    out.angles.push_back(c * c >= 0.5 ? std::asin(sn) : std::acos(c));
  }
  std::sort(out.angles.begin(), out.angles.end());
  return out;
}

double chordal_distance(const SubspacePoint& a, const SubspacePoint& b) {
  require_same_ambient(a, b);
  const double dim_gap = std::abs(a.sub_dim() - b.sub_dim());
  return std::sqrt(dim_gap + cross_residual(a, b).squaredNorm());
}

double projector_distance(const SubspacePoint& a, const SubspacePoint& b) {
  require_same_ambient(a, b);
  const double ab = b.project_out(a.basis()).squaredNorm();
  const double ba = a.project_out(b.basis()).squaredNorm();
  return std::sqrt(ab + ba);
}

Eigenspace top_eigenspace(const Matrix& m, int d) {
  if (m.rows() != m.cols()) {
    throw DimensionError("top_eigenspace expects a square matrix, got " +
                         shape(m));
  }
  const int n = static_cast<int>(m.rows());
  if (d < 1 || d > n - 1) {
    throw DomainError("top_eigenspace needs 1 <= d <= n-1, got d=" +
                      std::to_string(d) + ", n=" + std::to_string(n));
  }
  const double asym = (m - m.transpose()).norm();
  if (!(asym <= kTol.symmetry * std::max(1.0, m.norm()))) {
    throw SymmetryError("matrix is not symmetric (||M - M^T||_F = " +
                        std::to_string(asym) + ")");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success) {
    throw DomainError("symmetric eigensolver did not converge");
  }
  const Vector ascending = eig.eigenvalues();
  Vector descending = ascending.reverse();

  Matrix top(n, d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd v = eig.eigenvectors().col(n - 1 - j);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    top.col(j) = v;
  }
  const double gap = descending(d - 1) - descending(d);
  return Eigenspace{orthonormalize(top), std::move(descending), gap,
                    gap < kTol.degenerate_gap};
}

TangentVector riemannian_gradient(const SubspacePoint& y,
                                  const Matrix& euclid_grad) {
  if (euclid_grad.rows() != y.basis().rows() ||
      euclid_grad.cols() != y.basis().cols()) {
    throw DimensionError("gradient " + shape(euclid_grad) +
                         " does not match base point " + shape(y.basis()));
  }
  return TangentVector(y, y.project_out(euclid_grad));
}

SubspacePoint exp_map(const TangentVector& v, double step) {
  const Matrix& y = v.at().basis();
  Eigen::JacobiSVD<Matrix> svd(v.direction(),
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector sigma = svd.singularValues();
  const Vector c = (step * sigma).array().cos();
  const Vector s = (step * sigma).array().sin();
  const Matrix& right = svd.matrixV();
  const Matrix moved = (y * right) * c.asDiagonal() * right.transpose() +
                       svd.matrixU() * s.asDiagonal() * right.transpose();
  return orthonormalize(moved);
}

SubspacePoint sample_ball_boundary(const SubspacePoint& center, double radius,
                                   std::uint64_t seed) {
  const int n = center.ambient_dim();
  const int d = center.sub_dim();
  if (!(radius > 0.0) || !(radius < std::sqrt(static_cast<double>(d)))) {
    throw DomainError("ball radius must lie in (0, sqrt(" + std::to_string(d) +
                      ")), got " + std::to_string(radius));
  }
  if (n == d) {
    throw DomainError("Gr(n, n) is a single point; no boundary to sample");
  }

  Rng rng(mix64(seed));
  const Matrix raw = center.project_out(gaussian_matrix(rng, n, d));
  Eigen::JacobiSVD<Matrix> svd(raw, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector sigma = svd.singularValues();
  if (!(sigma(0) > 0.0)) throw DomainError("degenerate random direction");
  sigma /= sigma(0);

  // Along the geodesic the principal angles are step * sigma_i while
  // step * sigma_max <= pi/2, so the distance has a closed form.
  auto distance_at = [](const Vector& sv, double step) {
    return std::sqrt((step * sv).array().sin().square().sum());
  };
  const double half_pi = std::numbers::pi / 2.0;
  if (distance_at(sigma, half_pi) < radius) {
    // Flatten the spectrum; the geodesic then reaches sqrt(rank).
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      sigma(i) = sigma(i) > kTol.rank ? 1.0 : 0.0;
    if (distance_at(sigma, half_pi) < radius) {
      throw DomainError("radius exceeds the reachable chordal distance");
    }
  }

  double lo = 0.0;
  double hi = half_pi;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (distance_at(sigma, mid) < radius ? lo : hi) = mid;
  }
  const Matrix direction =
      svd.matrixU() * sigma.asDiagonal() * svd.matrixV().transpose();
  // Re-project to remove rounding drift out of the horizontal space.
  return exp_map(TangentVector(center, center.project_out(direction)),
                 0.5 * (lo + hi));
}

}  // namespace gerost
