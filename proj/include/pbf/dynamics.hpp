#pragma once

#include <functional>
#include <vector>

#include "pbf/barrier.hpp"

namespace pbf {

/// Control-affine plant with uncertainty channels:
///   xdot = f(t,x) + g(t,x) u + f~(t,x) + g~(t,x) u.
/// A controller only ever sees f and g; the tilde terms are the model error
/// that the true plant carries.
class UncertainAffineSystem {
 public:
  using Drift = std::function<Vector(double, const Vector&)>;
  using InputMap = std::function<Matrix(double, const Vector&)>;

  UncertainAffineSystem(int n, int m, Drift f, InputMap g, Drift f_tilde,
                        InputMap g_tilde);

  int state_dim() const { return n_; }
  int input_dim() const { return m_; }

  Vector f(double t, const Vector& x) const { return f_(t, x); }
  Matrix g(double t, const Vector& x) const { return g_(t, x); }
  Vector f_tilde(double t, const Vector& x) const { return f_tilde_(t, x); }
  Matrix g_tilde(double t, const Vector& x) const { return g_tilde_(t, x); }

  Vector nominal_rhs(double t, const Vector& x, const Vector& u) const;
  Vector true_rhs(double t, const Vector& x, const Vector& u) const;

 private:
  int n_;
  int m_;
  Drift f_;
  InputMap g_;
  Drift f_tilde_;
  InputMap g_tilde_;
};

struct PendulumParams {
  double grav = 10.0;   // m/s^2
  double mass = 2.0;    // kg
  double length = 1.0;  // m
  double F_bar = 2.0;   // N, bound on |F(t)|
  double Kp = 0.6;      // 1/s^2
  double Kd = 0.6;      // 1/s

  void validate() const;

  /// Bound on ||f~||: F_bar / (m l).
  double uncertainty_bound() const { return F_bar / (mass * length); }
};

/// F(t) = F_bar (1 - 2 s(t - t1) + s(t - t2) + s(t - t3)) for up to three step
/// times. s is the right-continuous Heaviside step (s(0) = 1).
class StepDisturbance {
 public:
  explicit StepDisturbance(double F_bar,
                           std::vector<double> step_times = {5.0, 10.0, 15.0});

  double operator()(double t) const;
  /// Value just before t (left limit).
  double left_limit(double t) const;

  double bound() const { return F_bar_; }
  const std::vector<double>& step_times() const { return step_times_; }

 private:
  double multiplier(double t, bool left) const;

  double F_bar_;
  std::vector<double> step_times_;
};

UncertainAffineSystem pendulum_system(const PendulumParams& params,
                                      const StepDisturbance& dist);

/// Feedback-linearising PD torque m l^2 (-g/l sin x1 - Kp x1 - Kd x2).
double desired_controller(const PendulumParams& params, const Vector& x);

}  // namespace pbf
