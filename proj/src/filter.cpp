#include "pbf/filter.hpp"

namespace pbf {

SafetyConstraint safety_constraint(const UncertainAffineSystem& sys,
                                   const QuadraticBarrier& b,
                                   const LinearClassKe& alpha,
                                   const CompensationTerm& sigma, double t,
                                   const Vector& x) {
  const LieDerivatives lie = lie_derivatives(b, sys, t, x);
  return {lie.Lg_h, -alpha(b.eval(x)) + sigma.eval(b, t, x) - lie.Lf_h};
}

FilterResult project_half_space(const SafetyConstraint& c, const Vector& u_des) {
  FilterResult out;
  const double lhs = c.a.dot(u_des);
  if (lhs >= c.b0) {
    out.u = u_des;
    out.slack = lhs - c.b0;
    return out;
  }
  const double a2 = c.a.squaredNorm();
  if (a2 == 0.0) {
    // 0 >= b0 > 0: no input satisfies the constraint.
    out.feasible = false;
    out.slack = lhs - c.b0;
    return out;
  }
  out.u = u_des + ((c.b0 - lhs) / a2) * c.a.transpose();
  out.active = true;
  out.slack = c.a.dot(out.u) - c.b0;
  return out;
}

FilterResult safety_filter(const UncertainAffineSystem& sys,
                           const QuadraticBarrier& b,
                           const LinearClassKe& alpha,
                           const CompensationTerm& sigma, double t,
                           const Vector& x, const Vector& u_des) {
  return project_half_space(safety_constraint(sys, b, alpha, sigma, t, x), u_des);
}

}  // namespace pbf
