#include "pbf/compensation.hpp"

#include <cmath>

#include "pbf/error.hpp"

namespace pbf {

IssfGain::IssfGain(double eps0, double lambda) : eps0_(eps0), lambda_(lambda) {
  if (!(eps0 > 0.0) || !std::isfinite(eps0))
    throw InvalidArgument("ISSf gain eps0 must be positive (eps > 0)");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("ISSf rate lambda must be nonnegative (d eps/dr >= 0)");
}

double IssfGain::operator()(double r) const { return eps0_ * std::exp(lambda_ * r); }

double IssfGain::derivative(double r) const { return lambda_ * (*this)(r); }

CompensationTerm CompensationTerm::none() { return CompensationTerm(None{}); }

CompensationTerm CompensationTerm::robust_bound(double p_hat) {
  if (!(p_hat >= 0.0) || !std::isfinite(p_hat))
    throw InvalidArgument("uncertainty estimate p_hat must be nonnegative");
  return CompensationTerm(RobustBound{p_hat});
}

CompensationTerm CompensationTerm::issf(double eps0, double lambda) {
  IssfGain(eps0, lambda);  // validates
  return CompensationTerm(Issf{eps0, lambda});
}

double CompensationTerm::eval(const QuadraticBarrier& b, double t,
                              const Vector& x, const Vector& /*u*/) const {
  return eval(b, t, x);
}

double CompensationTerm::eval(const QuadraticBarrier& b, double /*t*/,
                              const Vector& x) const {
  struct Visitor {
    const QuadraticBarrier& b;
    const Vector& x;
    double operator()(const None&) const { return 0.0; }
    double operator()(const RobustBound& r) const {
      return b.grad(x).norm() * r.p_hat;
    }
    double operator()(const Issf& s) const {
      const double eps = IssfGain(s.eps0, s.lambda)(b.eval(x));
      return b.grad(x).squaredNorm() / eps;
    }
  };
  return std::visit(Visitor{b, x}, variant_);
}

}  // namespace pbf
