#include "pbf/barrier.hpp"

#include <cmath>

#include "pbf/dynamics.hpp"
#include "pbf/error.hpp"

namespace pbf {

namespace {

struct Eigen2 {
  double lo, hi;
  Eigen::Matrix2d vectors;  // columns: eigenvector of lo, eigenvector of hi
};

// Closed-form spectral decomposition of a symmetric 2x2 matrix.
Eigen2 symmetric_eigen(const Eigen::Matrix2d& A) {
  const double a = A(0, 0), b = A(0, 1), d = A(1, 1);
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), b);
  Eigen2 out{mean - radius, mean + radius, Eigen::Matrix2d::Identity()};
  if (b == 0.0) {
    if (a > d) out.vectors << 0.0, 1.0, 1.0, 0.0;
    return out;
  }
  // (A - lambda I) v = 0 with v = (b, lambda - a).
  Eigen::Vector2d v_lo(b, out.lo - a), v_hi(b, out.hi - a);
  out.vectors.col(0) = v_lo.normalized();
  out.vectors.col(1) = v_hi.normalized();
  return out;
}

}  // namespace

QuadraticBarrier::QuadraticBarrier(const Eigen::Matrix2d& A) : A_(A) {
  if (!A.allFinite()) throw InvalidArgument("barrier matrix must be finite");
  const double scale = A.cwiseAbs().maxCoeff();
  if (std::abs(A(0, 1) - A(1, 0)) > 1e-12 * std::max(1.0, scale))
    throw InvalidArgument("barrier matrix must be symmetric");
  A_(1, 0) = A_(0, 1);
  const Eigen2 eig = symmetric_eigen(A_);
  if (!(eig.lo > 0.0))
    throw InvalidArgument("barrier matrix must be positive definite");
  lambda_min_ = eig.lo;
  lambda_max_ = eig.hi;
  const Eigen::Vector2d inv_sqrt(1.0 / std::sqrt(eig.lo), 1.0 / std::sqrt(eig.hi));
  inv_sqrt_ = eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.transpose();
}

QuadraticBarrier QuadraticBarrier::from_weights(double q1, double q2) {
  if (!(q1 > 0.0) || !(q2 > 0.0))
    throw InvalidArgument("barrier weights q1, q2 must be positive");
  Eigen::Matrix2d A;
  A << 2.0 * q1 * q1, q1 * q2, q1 * q2, 2.0 * q2 * q2;
  return QuadraticBarrier(A);
}

double QuadraticBarrier::eval(const Vector& x) const {
  const Eigen::Vector2d v = x.head<2>();
  return 1.0 - 0.5 * v.dot(A_ * v);
}

RowVector QuadraticBarrier::grad(const Vector& x) const {
  const Eigen::Vector2d v = x.head<2>();
  return -(A_ * v).transpose();
}

Eigen::Vector2d QuadraticBarrier::level_set_point(double level,
                                                  double theta) const {
  if (level > max_value())
    throw InvalidArgument("level set above the barrier maximum is empty");
  const double radius = std::sqrt(2.0 * (max_value() - level));
  return radius * (inv_sqrt_ * Eigen::Vector2d(std::cos(theta), std::sin(theta)));
}

LinearClassKe::LinearClassKe(double rate) : rate_(rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw InvalidArgument("class-K rate alpha_c must be positive and finite");
}

LieDerivatives lie_derivatives(const QuadraticBarrier& b,
                               const UncertainAffineSystem& sys, double t,
                               const Vector& x) {
  const RowVector dh = b.grad(x);
  return {dh.dot(sys.f(t, x)), dh * sys.g(t, x)};
}

}  // namespace pbf
