#include "pbf/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "pbf/error.hpp"

namespace pbf {

std::string_view to_string(CertificateEquation eq) {
  switch (eq) {
    case CertificateEquation::RcbfUnder: return "rcbf_under";
    case CertificateEquation::RcbfOver: return "rcbf_over";
    case CertificateEquation::Issf: return "issf";
    case CertificateEquation::IssfPbf: return "issf_pbf";
  }
  return "unknown";
}

CertificateEquation equation_from_string(std::string_view name) {
  for (auto eq : {CertificateEquation::RcbfUnder, CertificateEquation::RcbfOver,
                  CertificateEquation::Issf, CertificateEquation::IssfPbf})
    if (to_string(eq) == name) return eq;
  throw InvalidArgument("unknown certificate equation '" + std::string(name) + "'");
}

GradientNormBounds::GradientNormBounds(Map lo, Map hi, double domain_max)
    : lo_(std::move(lo)), hi_(std::move(hi)), domain_max_(domain_max) {}

void GradientNormBounds::check(double h_star) const {
  if (!(h_star <= domain_max_))
    throw InvalidArgument("level " + std::to_string(h_star) +
                          " lies outside the barrier's range");
}

double GradientNormBounds::lo(double h_star) const {
  check(h_star);
  return lo_(h_star);
}

double GradientNormBounds::hi(double h_star) const {
  check(h_star);
  return hi_(h_star);
}

GradientNormBounds delta_bounds_quadratic(const QuadraticBarrier& b) {
  const double top = QuadraticBarrier::max_value();
  const double lmin = b.lambda_min(), lmax = b.lambda_max();
  return GradientNormBounds(
      [=](double h) { return std::sqrt(2.0 * lmin * (top - h)); },
      [=](double h) { return std::sqrt(2.0 * lmax * (top - h)); }, top);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tolerance, int max_iterations) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi) ||
      std::signbit(f_lo) == std::signbit(f_hi)) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "] (f = " << f_lo
        << ", " << f_hi << ")";
    throw CertificateUnavailable(msg.str());
  }
  // The lower end is returned, so the certified level never exceeds the root.
  for (int i = 0; i < max_iterations && hi - lo > tolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw InvalidArgument(std::string(name) + " must be finite and nonnegative");
}

LevelSetCertificate make_certificate(double h_star, CertificateEquation eq,
                                     double residual, bool conditions_ok,
                                     std::string annotation) {
  LevelSetCertificate c;
  c.h_star = h_star;
  c.equation = eq;
  c.residual = residual;
  c.conditions_ok = conditions_ok;
  c.regular = h_star < QuadraticBarrier::max_value();
  c.annotation = std::move(annotation);
  return c;
}

}  // namespace

LevelSetCertificate solve_hstar_rcbf(const LinearClassKe& alpha,
                                     const GradientNormBounds& d, double p_hat,
                                     double p, const BisectionOptions& opt) {
  require_nonnegative(p_hat, "p_hat");
  require_nonnegative(p, "p");
  if (p_hat == p)
    return make_certificate(0.0, CertificateEquation::RcbfOver, 0.0, true,
                            "p_hat = p: both branches give h* = 0");

  const bool under = p_hat < p;
  const double mismatch = p_hat - p;
  auto residual = [&](double h) {
    return alpha(h) - (under ? d.hi(h) : d.lo(h)) * mismatch;
  };
  const double upper = std::min(opt.upper, d.domain_max());
  const double h = bisect(residual, opt.lower, upper, opt.tolerance,
                          opt.max_iterations);
  return make_certificate(
      h, under ? CertificateEquation::RcbfUnder : CertificateEquation::RcbfOver,
      std::abs(residual(h)), true,
      under ? "p_hat < p: upper gradient bound (safety degradation)"
            : "p_hat > p: lower gradient bound (conservativeness)");
}

LevelSetCertificate solve_hstar_issf(const LinearClassKe& alpha, double eps0,
                                     double lambda, double p) {
  const IssfGain eps(eps0, lambda);
  require_nonnegative(p, "p");
  if (p == 0.0)
    return make_certificate(0.0, CertificateEquation::Issf, 0.0, true,
                            "p = 0: h* = 0");

  auto residual = [&](double h) { return h - alpha.inverse(-eps(h) * p * p / 4.0); };
  // eps(h) <= eps0 for h <= 0, so the root lies above -eps0 p^2 / (4 alpha_c).
  const double lower = std::min(-10.0, alpha.inverse(-eps0 * p * p / 4.0) - 1.0);
  const double h = bisect(residual, lower, 0.0);
  return make_certificate(h, CertificateEquation::Issf, std::abs(residual(h)),
                          true, "unique root on h* < 0");
}

LevelSetCertificate solve_hstar_issf_pbf(const LinearClassKe& alpha,
                                         const GradientNormBounds& d,
                                         double eps0, double lambda, double p,
                                         const BisectionOptions& opt,
                                         int scan_points) {
  const IssfGain eps(eps0, lambda);
  require_nonnegative(p, "p");
  if (scan_points < 2) throw InvalidArgument("scan_points must be at least 2");

  auto residual = [&](double h) {
    const double dl = d.lo(h);
    return h - alpha.inverse(dl * dl / eps(h) - dl * p);
  };
  auto valid = [&](double h) { return p == 0.0 || eps(h) <= 2.0 * d.lo(h) / p; };

  const double lower = opt.lower;
  const double upper = std::min(opt.upper, d.domain_max());
  const double step = (upper - lower) / (scan_points - 1);
  std::vector<double> roots;
  double prev_h = lower, prev_f = residual(lower);
  if (prev_f == 0.0) roots.push_back(lower);
  for (int i = 1; i < scan_points; ++i) {
    const double h = (i == scan_points - 1) ? upper : lower + i * step;
    const double f = residual(h);
    if (f == 0.0) {
      roots.push_back(h);
    } else if (prev_f != 0.0 && std::signbit(f) != std::signbit(prev_f)) {
      roots.push_back(bisect(residual, prev_h, h, opt.tolerance, opt.max_iterations));
    }
    prev_h = h;
    prev_f = f;
  }

  std::vector<double> valid_roots;
  std::copy_if(roots.begin(), roots.end(), std::back_inserter(valid_roots), valid);
  if (valid_roots.empty()) {
    std::ostringstream msg;
    msg << "no root of the tightened ISSf equation satisfies eps(h*) <= "
           "2 delta_lo(h*)/p ("
        << roots.size() << " root(s) found)";
    throw CertificateUnavailable(msg.str());
  }
  const double h = *std::max_element(valid_roots.begin(), valid_roots.end());
  std::ostringstream note;
  note << "largest valid root; " << valid_roots.size() << " of " << roots.size()
       << " root(s) valid";
  return make_certificate(h, CertificateEquation::IssfPbf, std::abs(residual(h)),
                          valid(h), note.str());
}

double issf_set_margin(const QuadraticBarrier& b, const LinearClassKe& alpha,
                       double eps0, double lambda, double p, const Vector& x) {
  const IssfGain eps(eps0, lambda);
  const double h = b.eval(x);
  return h - alpha.inverse(-eps(h) * p * p / 4.0);
}

CertificateComparison compare_certificates(const LevelSetCertificate& issf,
                                           const LevelSetCertificate& pbf) {
  if (issf.equation != CertificateEquation::Issf ||
      pbf.equation != CertificateEquation::IssfPbf)
    throw InvalidArgument("compare_certificates expects an issf and an issf_pbf certificate");
  const double gap = pbf.h_star - issf.h_star;
  if (gap < -1e-12) {
    std::ostringstream msg;
    msg << "tightened certificate h* = " << pbf.h_star
        << " lies below the ISSf certificate h* = " << issf.h_star;
    throw InvariantFailure(msg.str());
  }
  return {issf.h_star, pbf.h_star, gap};
}

}  // namespace pbf
