// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

#include "gerost/worstcase.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gerost/errors.hpp"

namespace gerost {

namespace {

// Singular values of the residual of Y against the center below this are
// treated as zero when building the low-rank frame.
constexpr double kFrameCutoff = 1e-13;

void require_compatible(const SubspacePoint& y, const SubspacePoint& center) {
  if (y.ambient_dim() != center.ambient_dim()) {
    throw DimensionError("estimate lives in R^" +
                         std::to_string(y.ambient_dim()) +
                         " but the ball center in R^" +
                         std::to_string(center.ambient_dim()));
  }
  if (y.sub_dim() + center.sub_dim() > y.ambient_dim()) {
    throw DimensionError("need k + d <= n, got k=" +
                         std::to_string(y.sub_dim()) +
                         ", d=" + std::to_string(center.sub_dim()) +
                         ", n=" + std::to_string(y.ambient_dim()));
  }
}

EigenPath resolve(EigenPath path, int n) {
  if (path != EigenPath::kAuto) return path;
  return n <= kAutoDenseLimit ? EigenPath::kDense : EigenPath::kLowRank;
}

}  // namespace

UncertaintyBall::UncertaintyBall(SubspacePoint center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw DomainError("ball radius must be positive and finite, got " +
                      std::to_string(radius_));
  }
}

Pencil::Pencil(const SubspacePoint& y, const SubspacePoint& center,
               EigenPath path)
    : path_(resolve(path, y.ambient_dim())),
      n_(y.ambient_dim()),
      d_(center.sub_dim()),
      center_(center.basis()) {
  require_compatible(y, center);
  if (path_ == EigenPath::kDense) {
    center_proj_ = center.projector();
    y_proj_ = y.projector();
    return;
  }

  // span[center, Y] = span[center, E] with E orthonormal and E ⊥ center.
  Matrix residual = center.project_out(y.basis());
  residual = center.project_out(residual);
  Eigen::JacobiSVD<Matrix> svd(residual, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  Eigen::Index extra = 0;
  while (extra < sv.size() && sv(extra) > kFrameCutoff) ++extra;

  frame_.resize(n_, d_ + extra);
  frame_.leftCols(d_) = center_;
  if (extra > 0) {
    const Matrix e0 = center.project_out(svd.matrixU().leftCols(extra));
    frame_.rightCols(extra) = orthonormalize(e0).basis();
  }
  reduced_ = frame_.transpose() * y.basis();
}

Pencil::Solution Pencil::solve(double lambda, bool with_spectrum) const {
  Solution out;
  if (path_ == EigenPath::kDense) {
    const Matrix b = lambda * center_proj_ - y_proj_;
    Eigenspace es = top_eigenspace(b, d_);
    out.top = es.basis.basis();
    out.distance = chordal_distance(es.basis, SubspacePoint(center_));
    out.gap = es.gap_at_d;
    if (with_spectrum) out.spectrum = std::move(es.eigenvalues);
    return out;
  }

  const Eigen::Index m = reduced_.rows();
  Matrix small = -reduced_ * reduced_.transpose();
  small.diagonal().head(d_).array() += lambda;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(small);
  const Vector& asc = eig.eigenvalues();

  // Reduced eigenvectors, descending order; the center is [I_d; 0] here.
  Matrix top(m, d_);
  for (int j = 0; j < d_; ++j) top.col(j) = eig.eigenvectors().col(m - 1 - j);
  const double outside = top.bottomRows(m - d_).squaredNorm();
  out.distance = std::sqrt(outside);
  out.top = orthonormalize(frame_ * top).basis();

  // B has n - m extra zero eigenvalues outside the frame.
  const double mu_d = asc(m - 1 - (d_ - 1));
  double mu_next = m > d_ ? asc(m - 1 - d_) : -std::numeric_limits<double>::infinity();
  if (n_ > m) mu_next = std::max(mu_next, 0.0);
  out.gap = mu_d - mu_next;

  if (with_spectrum) {
    std::vector<double> all(asc.data(), asc.data() + m);
    all.resize(static_cast<std::size_t>(n_), 0.0);
    std::sort(all.begin(), all.end(), std::greater<>());
    out.spectrum = Eigen::Map<const Vector>(all.data(), n_);
  }
  return out;
}

double Pencil::center_distance(double lambda) const {
  if (path_ == EigenPath::kDense) return solve(lambda).distance;
  const Eigen::Index m = reduced_.rows();
  if (m == d_) return 0.0;
  Matrix small = -reduced_ * reduced_.transpose();
  small.diagonal().head(d_).array() += lambda;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(small);
  return std::sqrt(
      eig.eigenvectors().rightCols(d_).bottomRows(m - d_).squaredNorm());
}

Matrix build_B(const SubspacePoint& y, const UncertaintyBall& ball,
               double lambda) {
  require_compatible(y, ball.center());
  if (!(lambda >= 0.0)) {
    throw DomainError("lambda must be non-negative, got " +
                      std::to_string(lambda));
  }
  return lambda * ball.center().projector() - y.projector();
}

double h(const SubspacePoint& y, const UncertaintyBall& ball, double lambda,
         EigenPath path) {
  if (!(lambda > 2.0)) {
    throw DomainError("h is defined for lambda > 2, got " +
                      std::to_string(lambda));
  }
  return Pencil(y, ball.center(), path).center_distance(lambda) - ball.radius();
}

namespace {

struct Probe {
  double lambda;
  double h;
  bool degenerate;
};

// Evaluates h at lambda, nudging lambda once if the split at index d is tied.
Probe probe(const Pencil& pencil, double rho, double lambda) {
  Pencil::Solution s = pencil.solve(lambda);
  if (s.gap >= kTol.degenerate_gap) return {lambda, s.distance - rho, false};
  const double nudged = lambda + kTol.tie_perturbation;
  s = pencil.solve(nudged);
  return {nudged, s.distance - rho, s.gap < kTol.degenerate_gap};
}

LambdaSolution bisect(const Pencil& pencil, int k, double rho, double eps_bis) {
  const double lo0 = 2.0 + kTol.gap_floor;
  const double hi0 = 2.0 + std::sqrt(static_cast<double>(k)) / rho;

  LambdaSolution out;
  Probe p = probe(pencil, rho, lo0);
  out.degenerate = p.degenerate;
  if (p.h <= 0.0) {
    out.lambda = p.lambda;
    out.active = false;
    out.h_value = p.h;
    return out;
  }

  out.active = true;
  double lo = lo0;
  double hi = std::max(hi0, lo0);
  const double min_width = (hi - lo) * std::ldexp(1.0, -50);
  for (int it = 1; it <= kTol.bisection_cap; ++it) {
    const double mid = 0.5 * (lo + hi);
    p = probe(pencil, rho, mid);
    out.degenerate = out.degenerate || p.degenerate;
    out.iterations = it;
    out.lambda = p.lambda;
    out.h_value = p.h;
    if (std::abs(p.h) <= eps_bis) break;
    (p.h > 0.0 ? lo : hi) = mid;
    if (hi - lo <= min_width) break;
  }
  return out;
}

}  // namespace

LambdaSolution solve_lambda(const SubspacePoint& y, const UncertaintyBall& ball,
                            double eps_bis, EigenPath path) {
  if (!(eps_bis > 0.0)) {
    throw DomainError("eps_bis must be positive");
  }
  const Pencil pencil(y, ball.center(), path);
  return bisect(pencil, y.sub_dim(), ball.radius(), eps_bis);
}

WorstCaseSolution worst_case(const SubspacePoint& y, const UncertaintyBall& ball,
                             double eps_bis, EigenPath path) {
  const int k = y.sub_dim();
  const int d = ball.center().sub_dim();
  if (k > d) {
    throw DimensionError("worst case needs k <= d, got k=" + std::to_string(k) +
                         ", d=" + std::to_string(d));
  }
  if (!(ball.radius() < std::sqrt(static_cast<double>(k)))) {
    throw DomainError("ball radius must be below sqrt(k)=" +
                      std::to_string(std::sqrt(static_cast<double>(k))));
  }
  if (!(eps_bis > 0.0)) {
    throw DomainError("eps_bis must be positive");
  }

  const Pencil pencil(y, ball.center(), path);
  const LambdaSolution lam = bisect(pencil, k, ball.radius(), eps_bis);
  Pencil::Solution top = pencil.solve(lam.lambda);
  SubspacePoint maximizer(std::move(top.top));
  const double objective = subspace_cost(y, maximizer);
  return WorstCaseSolution{std::move(maximizer), lam.lambda,     lam.active,
                           objective,            top.gap,        lam.iterations,
                           lam.degenerate};
}

double robust_objective_F(const SubspacePoint& y, const UncertaintyBall& ball,
                          double eps_bis, EigenPath path) {
  return worst_case(y, ball, eps_bis, path).objective;
}

double subspace_cost(const SubspacePoint& y, const SubspacePoint& w) {
  return y.project_out(w.basis()).squaredNorm();
}

TangentVector cost_gradient(const SubspacePoint& y, const SubspacePoint& w) {
  const Matrix& yb = y.basis();
  const Matrix& wb = w.basis();
  return TangentVector(y, y.project_out(-2.0 * (wb * (wb.transpose() * yb))));
}

}  // namespace gerost
