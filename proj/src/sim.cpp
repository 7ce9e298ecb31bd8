#include "pbf/sim.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pbf/filter.hpp"

namespace pbf {

Vector rk4_step(const Rhs& rhs, double t, const Vector& x, double dt) {
  const double half = 0.5 * dt;
  const Vector k1 = rhs(t, x);
  const Vector k2 = rhs(t + half, x + half * k1);
  const Vector k3 = rhs(t + half, x + half * k2);
  const Vector k4 = rhs(t + dt, x + dt * k3);
  Vector next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) {
    std::ostringstream msg;
    msg << "non-finite state after step from t = " << t << " (dt = " << dt
        << ", x = [" << x.transpose() << "])";
    throw IntegrationError(msg.str(), Trajectory{});
  }
  return next;
}

double Trajectory::min_h() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) m = std::min(m, s.h);
  return m;
}

namespace {

long steps_for(double length, double dt) {
  const double ratio = length / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio))
    return std::max(1L, static_cast<long>(rounded));
  return std::max(1L, static_cast<long>(std::ceil(ratio)));
}

}  // namespace

Trajectory simulate(const SimulationSetup& setup) {
  if (!setup.x0.allFinite()) throw InvalidArgument("initial state must be finite");
  if (!(setup.dt > 0.0) || !std::isfinite(setup.dt))
    throw InvalidArgument("time step dt must be positive");
  if (!(setup.horizon > 0.0) || !std::isfinite(setup.horizon))
    throw InvalidArgument("horizon must be positive");

  const StepDisturbance dist(setup.plant.F_bar, setup.step_times);
  const UncertainAffineSystem sys = pendulum_system(setup.plant, dist);
  const QuadraticBarrier barrier = QuadraticBarrier::from_weights(setup.q1, setup.q2);
  const LinearClassKe alpha(setup.alpha_c);
  const CompensationTerm& sigma = setup.compensation;

  Trajectory traj;
  traj.dt = setup.dt;
  traj.scenario = setup.name;

  auto control = [&](double t, const Vector& x) {
    Vector u_des(1);
    u_des << desired_controller(setup.plant, x);
    FilterResult r = safety_filter(sys, barrier, alpha, sigma, t, x, u_des);
    if (!r.feasible) {
      std::ostringstream msg;
      msg << "safety filter infeasible at t = " << t << ", x = ["
          << x.transpose() << "]: grad h . g = 0 with required bound > 0";
      throw InfeasibleError(msg.str(), traj);
    }
    return r;
  };

  auto record = [&](double t, const Vector& x, double F) {
    const FilterResult r = control(t, x);
    traj.samples.push_back({t, x.head<2>(), r.u(0), F, barrier.eval(x),
                            sigma.eval(barrier, t, x), r.slack});
  };

  std::vector<double> bounds{0.0};
  for (double e : setup.step_times)
    if (e > 0.0 && e < setup.horizon) bounds.push_back(e);
  bounds.push_back(setup.horizon);

  Vector x = setup.x0;
  for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
    const double start = bounds[seg], end = bounds[seg + 1];
    const long n = steps_for(end - start, setup.dt);
    const double h = (end - start) / n;
    // Disturbance is held at its value on [start, end) for every stage.
    const double last_inside = std::nextafter(end, start);
    auto rhs = [&](double tau, const Vector& state) {
      const Vector u = control(tau, state).u;
      return Vector(sys.true_rhs(std::min(tau, last_inside), state, u));
    };
    for (long k = 0; k < n; ++k) {
      const double t = start + k * h;
      record(t, x, dist(t));
      try {
        x = rk4_step(rhs, t, x, h);
      } catch (const IntegrationError& e) {
        throw IntegrationError(e.what(), traj);
      }
    }
    if (seg + 2 < bounds.size()) record(end, x, dist.left_limit(end));
  }
  record(setup.horizon, x, dist(setup.horizon));
  return traj;
}

Monitor monitor(const Trajectory& traj, double h_star, double tol) {
  if (traj.samples.empty()) throw InvalidArgument("cannot monitor an empty trajectory");
  Monitor m{traj.samples.front().h, traj.samples.front().t, h_star, false};
  for (const auto& s : traj.samples) {
    if (s.h < m.min_h) {
      m.min_h = s.h;
      m.min_h_time = s.t;
    }
  }
  m.violated = m.min_h < h_star - tol;
  return m;
}

}  // namespace pbf
