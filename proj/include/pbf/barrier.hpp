#pragma once

#include <Eigen/Core>

namespace pbf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

/// Quadratic barrier h(x) = 1 - 1/2 x^T A x on a two-dimensional state.
///
/// A must be symmetric positive definite. Its eigenvalues are computed once,
/// in closed form, at construction. h attains its maximum 1 only at the origin
/// and the gradient vanishes nowhere else, so every level below 1 is regular.
class QuadraticBarrier {
 public:
  explicit QuadraticBarrier(const Eigen::Matrix2d& A);

  /// A = [[2 q1^2, q1 q2], [q1 q2, 2 q2^2]], q1, q2 > 0.
  static QuadraticBarrier from_weights(double q1, double q2);

  double eval(const Vector& x) const;
  RowVector grad(const Vector& x) const;

  const Eigen::Matrix2d& matrix() const { return A_; }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

  /// Largest value h can take.
  static constexpr double max_value() { return 1.0; }

  /// Point on the level set {h = level} at angle theta:
  /// x = sqrt(2 (1 - level)) A^{-1/2} [cos theta, sin theta]^T.
  Eigen::Vector2d level_set_point(double level, double theta) const;

 private:
  Eigen::Matrix2d A_;
  Eigen::Matrix2d inv_sqrt_;
  double lambda_min_;
  double lambda_max_;
};

/// Linear extended class-K-infinity function alpha(r) = c r, c > 0.
class LinearClassKe {
 public:
  explicit LinearClassKe(double rate);

  double operator()(double r) const { return rate_ * r; }
  double inverse(double s) const { return s / rate_; }
  double rate() const { return rate_; }

 private:
  double rate_;
};

class UncertainAffineSystem;

/// Known part of the barrier derivative: hdot_n = Lf_h + Lg_h u.
struct LieDerivatives {
  double Lf_h;
  RowVector Lg_h;
};

LieDerivatives lie_derivatives(const QuadraticBarrier& b,
                               const UncertainAffineSystem& sys, double t,
                               const Vector& x);

}  // namespace pbf
