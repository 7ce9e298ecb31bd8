#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "pbf/barrier.hpp"
#include "pbf/compensation.hpp"

namespace pbf {

enum class CertificateEquation { RcbfUnder, RcbfOver, Issf, IssfPbf };

std::string_view to_string(CertificateEquation eq);
CertificateEquation equation_from_string(std::string_view name);

/// A solved level h* for which the set {x : h(x) >= h*} is certified
/// forward invariant.
struct LevelSetCertificate {
  double h_star = 0.0;
  CertificateEquation equation = CertificateEquation::RcbfOver;
  /// |mismatch| of the defining equation at h_star.
  double residual = 0.0;
  /// Side conditions of the equation (eps(h*) <= 2 delta_lo(h*)/p for IssfPbf).
  bool conditions_ok = true;
  /// h_star is a regular value of the barrier (h_star < 1).
  bool regular = true;
  /// Branch or root-selection note.
  std::string annotation;
};

/// delta_lo(h*) <= ||grad h(x)|| <= delta_hi(h*) for every x with h(x) = h*.
class GradientNormBounds {
 public:
  using Map = std::function<double(double)>;

  GradientNormBounds(Map lo, Map hi, double domain_max);

  double lo(double h_star) const;
  double hi(double h_star) const;
  double domain_max() const { return domain_max_; }

 private:
  void check(double h_star) const;

  Map lo_;
  Map hi_;
  double domain_max_;
};

/// delta_lo = sqrt(2 lambda_min (1 - h*)), delta_hi = sqrt(2 lambda_max (1 - h*)).
GradientNormBounds delta_bounds_quadratic(const QuadraticBarrier& b);

struct BisectionOptions {
  double lower = -10.0;
  double upper = 1.0 - 1e-12;
  double tolerance = 1e-12;
  int max_iterations = 200;
};

/// Root of a continuous scalar function on [lo, hi] given a sign change.
/// Throws CertificateUnavailable if f(lo) and f(hi) share a sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tolerance = 1e-12, int max_iterations = 200);

/// Level certified for sigma = ||grad h|| p_hat against an additive
/// uncertainty bounded by p. Solves alpha(h*) = delta(h*) (p_hat - p) with
/// delta_hi when p_hat < p and delta_lo when p_hat > p; p_hat = p gives 0.
LevelSetCertificate solve_hstar_rcbf(const LinearClassKe& alpha,
                                     const GradientNormBounds& d, double p_hat,
                                     double p,
                                     const BisectionOptions& opt = {});

/// ISSf level: h* = alpha^{-1}(-eps(h*) p^2 / 4). Unique and negative for
/// p > 0.
LevelSetCertificate solve_hstar_issf(const LinearClassKe& alpha, double eps0,
                                     double lambda, double p);

/// Tightened ISSf level:
///   h* = alpha^{-1}(delta_lo(h*)^2 / eps(h*) - delta_lo(h*) p)
/// subject to eps(h*) <= 2 delta_lo(h*) / p. The bracket is scanned at
/// `scan_points` points, every sign change is bisected, and the largest root
/// satisfying the side condition is returned.
LevelSetCertificate solve_hstar_issf_pbf(const LinearClassKe& alpha,
                                         const GradientNormBounds& d,
                                         double eps0, double lambda, double p,
                                         const BisectionOptions& opt = {},
                                         int scan_points = 10000);

/// Margin of x with respect to the ISSf set
///   h(x) - alpha^{-1}(-eps(h(x)) p^2 / 4) >= 0.
double issf_set_margin(const QuadraticBarrier& b, const LinearClassKe& alpha,
                       double eps0, double lambda, double p, const Vector& x);

struct CertificateComparison {
  double issf_h_star;
  double pbf_h_star;
  double gap;  // pbf - issf, >= 0
};

/// Checks that the tightened certificate is no looser than the ISSf one.
/// Throws InvariantFailure if the ordering is violated.
CertificateComparison compare_certificates(const LevelSetCertificate& issf,
                                           const LevelSetCertificate& pbf);

}  // namespace pbf
