#pragma once

#include "pbf/barrier.hpp"
#include "pbf/compensation.hpp"
#include "pbf/dynamics.hpp"

namespace pbf {

struct FilterResult {
  Vector u;
  bool active = false;
  /// hdot_n - sigma + alpha(h) at the returned input.
  double slack = 0.0;
  bool feasible = true;
};

/// Half-space data of the robust constraint a u >= b0, with a = Lg_h and
/// b0 = -alpha(h) + sigma - Lf_h.
struct SafetyConstraint {
  RowVector a;
  double b0;
};

SafetyConstraint safety_constraint(const UncertainAffineSystem& sys,
                                   const QuadraticBarrier& b,
                                   const LinearClassKe& alpha,
                                   const CompensationTerm& sigma, double t,
                                   const Vector& x);

/// Minimum-norm modification of u_des satisfying the robust constraint, i.e.
/// the Euclidean projection of u_des onto {u : a u >= b0}.
///
/// When a = 0 and b0 > 0 no input works and the result is flagged infeasible
/// with an empty u.
FilterResult safety_filter(const UncertainAffineSystem& sys,
                           const QuadraticBarrier& b,
                           const LinearClassKe& alpha,
                           const CompensationTerm& sigma, double t,
                           const Vector& x, const Vector& u_des);

FilterResult project_half_space(const SafetyConstraint& c, const Vector& u_des);

}  // namespace pbf
