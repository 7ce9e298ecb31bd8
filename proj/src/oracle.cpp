#include "pbf/oracle.hpp"

#include <cmath>
#include <limits>

namespace pbf::oracle {

std::vector<double> sign_scan_roots(const std::function<double(double)>& f,
                                    double lo, double hi, long points) {
  std::vector<double> roots;
  if (points < 2) return roots;
  const double step = (hi - lo) / static_cast<double>(points - 1);
  double x_prev = lo, f_prev = f(lo);
  if (f_prev == 0.0) roots.push_back(lo);
  for (long i = 1; i < points; ++i) {
    const double x = (i == points - 1) ? hi : lo + static_cast<double>(i) * step;
    const double fx = f(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (f_prev != 0.0 && (fx < 0.0) != (f_prev < 0.0)) {
      roots.push_back(x_prev + (x - x_prev) * f_prev / (f_prev - fx));
    }
    x_prev = x;
    f_prev = fx;
  }
  return roots;
}

std::optional<double> fixed_point(const std::function<double(double)>& g,
                                  double start, double tol, int max_iterations) {
  double x = start;
  for (int i = 0; i < max_iterations; ++i) {
    const double next = g(x);
    if (!std::isfinite(next)) return std::nullopt;
    if (std::abs(next - x) < tol) return next;
    x = next;
  }
  return std::nullopt;
}

std::optional<double> grid_search_filter(double a, double b0, double u_des,
                                         double lo, double hi, double step) {
  const long n = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  std::optional<double> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (long k = 0; k <= n; ++k) {
    const double u = lo + static_cast<double>(k) * step;
    if (a * u < b0) continue;
    const double dist = std::abs(u - u_des);
    if (dist < best_dist) {
      best_dist = dist;
      best = u;
    }
  }
  return best;
}

}  // namespace pbf::oracle
