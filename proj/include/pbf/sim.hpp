#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pbf/barrier.hpp"
#include "pbf/compensation.hpp"
#include "pbf/dynamics.hpp"
#include "pbf/error.hpp"
#include "pbf/levelset.hpp"

namespace pbf {

using Rhs = std::function<Vector(double, const Vector&)>;

/// One classical fourth-order Runge-Kutta step. Throws IntegrationError if the
/// result is not finite.
Vector rk4_step(const Rhs& rhs, double t, const Vector& x, double dt);

struct TrajectorySample {
  double t;
  Eigen::Vector2d x;
  double u;
  double F;
  double h;
  double sigma;
  double constraint_residual;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double dt = 0.0;
  std::string scenario;
  /// Parameter snapshot, key -> value as written in the scenario file.
  std::map<std::string, std::string> metadata;

  double min_h() const;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, Trajectory partial)
      : Error(ErrorCode::Integration, what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, Trajectory partial)
      : Error(ErrorCode::Infeasible, what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// Everything a closed-loop pendulum run needs.
struct SimulationSetup {
  PendulumParams plant;
  std::vector<double> step_times{5.0, 10.0, 15.0};
  double q1 = 4.0;
  double q2 = 2.0;
  double alpha_c = 8.0;
  CompensationTerm compensation = CompensationTerm::robust_bound(1.0);
  Eigen::Vector2d x0 = Eigen::Vector2d::Zero();
  double dt = 1e-3;
  double horizon = 20.0;
  std::string name = "scenario";
};

/// Integrates the true dynamics under the safety filter. The filter is
/// re-evaluated at every Runge-Kutta stage and the grid is split at each
/// disturbance step so no step straddles a discontinuity; each step time is
/// recorded twice, with the left and right disturbance values.
Trajectory simulate(const SimulationSetup& setup);

struct Monitor {
  double min_h;
  double min_h_time;
  double h_star_ref;
  bool violated;
};

Monitor monitor(const Trajectory& traj, double h_star, double tol);
inline Monitor monitor(const Trajectory& traj, const LevelSetCertificate& cert,
                       double tol) {
  return monitor(traj, cert.h_star, tol);
}

}  // namespace pbf
