#pragma once

// Brute-force reference computations used to cross-check the solvers and the
// safety filter. Nothing here calls into the production solvers.

#include <functional>
#include <optional>
#include <vector>

namespace pbf::oracle {

/// Evaluates f on `points` equally spaced nodes of [lo, hi] and returns one
/// root estimate per sign change (linear interpolation inside the cell).
std::vector<double> sign_scan_roots(const std::function<double(double)>& f,
                                    double lo, double hi, long points);

/// h <- g(h) until successive iterates differ by less than tol.
std::optional<double> fixed_point(const std::function<double(double)>& g,
                                  double start, double tol = 1e-14,
                                  int max_iterations = 100000);

/// Scalar-input minimum-distance search: the grid node u in [lo, hi] (spacing
/// `step`) closest to u_des with a u >= b0. nullopt if no node is feasible.
std::optional<double> grid_search_filter(double a, double b0, double u_des,
                                         double lo, double hi, double step);

}  // namespace pbf::oracle
