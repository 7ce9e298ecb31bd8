#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pbf/filter.hpp"
#include "pbf/oracle.hpp"

namespace pbf {
namespace {

Vector vec(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector scalar(double a) {
  Vector v(1);
  v << a;
  return v;
}

class PendulumFilter : public ::testing::Test {
 protected:
  PendulumParams params;
  UncertainAffineSystem sys = pendulum_system(params, StepDisturbance(params.F_bar));
  QuadraticBarrier barrier = QuadraticBarrier::from_weights(4.0, 2.0);
  LinearClassKe alpha{8.0};
};

TEST_F(PendulumFilter, InactiveWithoutCompensation) {
  const Vector x = vec(0.25, 0);
  const Vector u_des = scalar(desired_controller(params, x));
  const auto r = safety_filter(sys, barrier, alpha, CompensationTerm::none(), 0.0, x, u_des);
  EXPECT_TRUE(r.feasible);
  EXPECT_FALSE(r.active);
  EXPECT_EQ(r.u(0), u_des(0));
  EXPECT_NEAR(r.slack, 5.248079185090458 - 4.948079185090458, 1e-12);
}

TEST_F(PendulumFilter, ActiveWithRobustCompensation) {
  const Vector x = vec(0.25, 0);
  const Vector u_des = scalar(desired_controller(params, x));
  const auto sigma = CompensationTerm::robust_bound(1.0);
  const auto r = safety_filter(sys, barrier, alpha, sigma, 0.0, x, u_des);
  EXPECT_TRUE(r.active);
  EXPECT_NEAR(r.u(0), -(std::sqrt(68.0) + 4.948079185090458), 1e-12);
  EXPECT_NEAR(r.slack, 0.0, 1e-12);

  const auto c = safety_constraint(sys, barrier, alpha, sigma, 0.0, x);
  const auto grid = oracle::grid_search_filter(c.a(0), c.b0, u_des(0), -100, 100, 1e-4);
  ASSERT_TRUE(grid);
  EXPECT_NEAR(*grid, r.u(0), 1e-4);
}

TEST_F(PendulumFilter, ZeroGradientWithPositiveBarrierPassesThrough) {
  const Vector u_des = scalar(3.0);
  const auto r = safety_filter(sys, barrier, alpha, CompensationTerm::robust_bound(5.0), 0.0,
                               vec(0, 0), u_des);
  EXPECT_TRUE(r.feasible);
  EXPECT_FALSE(r.active);
  EXPECT_EQ(r.u(0), 3.0);
}

TEST(SafetyFilter, InfeasibleWhenInputHasNoAuthority) {
  // g = 0 everywhere: a = 0, and outside S the required bound -alpha(h) > 0.
  const UncertainAffineSystem sys(
      2, 1, [](double, const Vector& x) { return Vector(Vector::Zero(x.size())); },
      [](double, const Vector&) { return Matrix(Matrix::Zero(2, 1)); },
      [](double, const Vector&) { return Vector(Vector::Zero(2)); },
      [](double, const Vector&) { return Matrix(Matrix::Zero(2, 1)); });
  const auto barrier = QuadraticBarrier::from_weights(4.0, 2.0);
  const auto r = safety_filter(sys, barrier, LinearClassKe(8.0), CompensationTerm::none(), 0.0,
                               vec(1.0, 0.0), scalar(0.0));
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.u.size(), 0);
}

TEST(SafetyFilter, ProjectsMultiInput) {
  SafetyConstraint c{RowVector(2), 5.0};
  c.a << 3.0, 4.0;
  Vector u_des = Vector::Zero(2);
  const auto r = project_half_space(c, u_des);
  EXPECT_TRUE(r.active);
  EXPECT_NEAR(r.u(0), 0.6, 1e-15);
  EXPECT_NEAR(r.u(1), 0.8, 1e-15);
  EXPECT_NEAR(c.a.dot(r.u), 5.0, 1e-14);
}

class RandomFilterCases : public PendulumFilter {
 protected:
  std::mt19937_64 rng{31};
  std::uniform_real_distribution<double> angle{-0.6, 0.6}, rate{-2.0, 2.0},
      p_hat{0.0, 3.0}, u{-40.0, 40.0}, time{0.0, 20.0};

  struct Case {
    double t;
    Vector x, u_des;
    CompensationTerm sigma;
  };

  Case draw() {
    return {time(rng), vec(angle(rng), rate(rng)), scalar(u(rng)),
            CompensationTerm::robust_bound(p_hat(rng))};
  }
};

TEST_F(RandomFilterCases, ConstraintSatisfied) {
  for (int i = 0; i < 10000; ++i) {
    const Case k = draw();
    const auto c = safety_constraint(sys, barrier, alpha, k.sigma, k.t, k.x);
    if (c.a.isZero()) continue;
    const auto r = project_half_space(c, k.u_des);
    ASSERT_TRUE(r.feasible);
    EXPECT_GE(c.a.dot(r.u), c.b0 - 1e-9);
    EXPECT_GE(r.slack, -1e-9);
    if (!r.active) {
      EXPECT_EQ(r.u, k.u_des);
    }
  }
}

TEST_F(RandomFilterCases, MinimalInterventionAgainstGridSearch) {
  int active = 0;
  while (active < 1000) {
    const Case k = draw();
    const auto c = safety_constraint(sys, barrier, alpha, k.sigma, k.t, k.x);
    const auto r = project_half_space(c, k.u_des);
    if (!r.active || std::abs(r.u(0)) > 99.0) continue;
    ++active;
    const auto grid = oracle::grid_search_filter(c.a(0), c.b0, k.u_des(0), -100, 100, 1e-3);
    ASSERT_TRUE(grid);
    EXPECT_LE(std::abs(r.u(0) - k.u_des(0)), std::abs(*grid - k.u_des(0)) + 1e-3);
  }
}

TEST_F(RandomFilterCases, Idempotent) {
  for (int i = 0; i < 2000; ++i) {
    const Case k = draw();
    const auto c = safety_constraint(sys, barrier, alpha, k.sigma, k.t, k.x);
    const auto once = project_half_space(c, k.u_des);
    const auto twice = project_half_space(c, once.u);
    EXPECT_NEAR(twice.u(0), once.u(0), 1e-12 * std::max(1.0, std::abs(once.u(0))));
  }
}

TEST_F(RandomFilterCases, ContinuousInState) {
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Case k = draw();
    if (k.x.norm() < 1e-3) continue;
    Vector dx = vec(dir(rng), dir(rng));
    dx /= dx.norm();
    auto change = [&](double step) {
      const auto r0 = safety_filter(sys, barrier, alpha, k.sigma, k.t, k.x, k.u_des);
      const auto r1 = safety_filter(sys, barrier, alpha, k.sigma, k.t, k.x + step * dx, k.u_des);
      return std::abs(r1.u(0) - r0.u(0));
    };
    const double u0 = safety_filter(sys, barrier, alpha, k.sigma, k.t, k.x, k.u_des).u(0);
    EXPECT_LE(change(1e-9), 1e-2 * change(1e-6) + 1e-9 * (1.0 + std::abs(u0)));
  }
}

}  // namespace
}  // namespace pbf
