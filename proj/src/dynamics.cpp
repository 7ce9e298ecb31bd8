#include "pbf/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "pbf/error.hpp"

namespace pbf {

UncertainAffineSystem::UncertainAffineSystem(int n, int m, Drift f, InputMap g,
                                             Drift f_tilde, InputMap g_tilde)
    : n_(n),
      m_(m),
      f_(std::move(f)),
      g_(std::move(g)),
      f_tilde_(std::move(f_tilde)),
      g_tilde_(std::move(g_tilde)) {
  if (n <= 0 || m <= 0) throw InvalidArgument("system dimensions must be positive");
  if (!f_ || !g_ || !f_tilde_ || !g_tilde_)
    throw InvalidArgument("system maps must all be provided");
}

Vector UncertainAffineSystem::nominal_rhs(double t, const Vector& x,
                                          const Vector& u) const {
  return f_(t, x) + g_(t, x) * u;
}

Vector UncertainAffineSystem::true_rhs(double t, const Vector& x,
                                       const Vector& u) const {
  return f_(t, x) + g_(t, x) * u + f_tilde_(t, x) + g_tilde_(t, x) * u;
}

void PendulumParams::validate() const {
  if (!(mass > 0.0)) throw InvalidArgument("pendulum mass must be positive");
  if (!(length > 0.0)) throw InvalidArgument("pendulum length must be positive");
  if (!(F_bar >= 0.0)) throw InvalidArgument("disturbance bound must be nonnegative");
  if (!std::isfinite(grav) || !std::isfinite(Kp) || !std::isfinite(Kd) ||
      !std::isfinite(F_bar))
    throw InvalidArgument("pendulum parameters must be finite");
}

StepDisturbance::StepDisturbance(double F_bar, std::vector<double> step_times)
    : F_bar_(F_bar), step_times_(std::move(step_times)) {
  if (!(F_bar >= 0.0)) throw InvalidArgument("disturbance bound must be nonnegative");
  if (!std::is_sorted(step_times_.begin(), step_times_.end()))
    throw InvalidArgument("disturbance step times must be ordered");
  // Beyond three steps the multiplier would leave [-1, 1].
  if (step_times_.size() > 3)
    throw InvalidArgument("at most three disturbance step times are supported");
}

double StepDisturbance::multiplier(double t, bool left) const {
  double m = 1.0;
  for (std::size_t i = 0; i < step_times_.size(); ++i) {
    const bool on = left ? t > step_times_[i] : t >= step_times_[i];
    if (on) m += (i == 0) ? -2.0 : 1.0;
  }
  return m;
}

double StepDisturbance::operator()(double t) const {
  return F_bar_ * multiplier(t, false);
}

double StepDisturbance::left_limit(double t) const {
  return F_bar_ * multiplier(t, true);
}

UncertainAffineSystem pendulum_system(const PendulumParams& params,
                                      const StepDisturbance& dist) {
  params.validate();
  const double grav = params.grav, ml = params.mass * params.length;
  const double ml2 = ml * params.length, len = params.length;
  auto f = [grav, len](double, const Vector& x) {
    Vector out(2);
    out << x(1), grav / len * std::sin(x(0));
    return out;
  };
  auto g = [ml2](double, const Vector&) {
    Matrix out(2, 1);
    out << 0.0, 1.0 / ml2;
    return out;
  };
  auto f_tilde = [dist, ml](double t, const Vector& x) {
    Vector out(2);
    out << 0.0, dist(t) * std::cos(x(0)) / ml;
    return out;
  };
  auto g_tilde = [](double, const Vector&) { return Matrix(Matrix::Zero(2, 1)); };
  return UncertainAffineSystem(2, 1, f, g, f_tilde, g_tilde);
}

double desired_controller(const PendulumParams& params, const Vector& x) {
  const double ml2 = params.mass * params.length * params.length;
  return ml2 * (-params.grav / params.length * std::sin(x(0)) -
                params.Kp * x(0) - params.Kd * x(1));
}

}  // namespace pbf
