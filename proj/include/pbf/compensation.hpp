#pragma once

#include <variant>

#include "pbf/barrier.hpp"

namespace pbf {

/// Robustifying term sigma(t,x,u) subtracted in the safety constraint
///   hdot_n(t,x,u) - sigma(t,x,u) >= -alpha(h(x)).
/// Every implemented variant depends only on the nominal barrier gradient.
class CompensationTerm {
 public:
  struct None {};
  /// sigma = ||grad h|| p_hat.
  struct RobustBound {
    double p_hat;
  };
  /// sigma = ||grad h||^2 / eps(h), eps(r) = eps0 exp(lambda r).
  struct Issf {
    double eps0;
    double lambda;
  };
  using Variant = std::variant<None, RobustBound, Issf>;

  static CompensationTerm none();
  static CompensationTerm robust_bound(double p_hat);
  static CompensationTerm issf(double eps0, double lambda);

  double eval(const QuadraticBarrier& b, double t, const Vector& x,
              const Vector& u) const;
  double eval(const QuadraticBarrier& b, double t, const Vector& x) const;

  const Variant& variant() const { return variant_; }
  bool is_none() const { return std::holds_alternative<None>(variant_); }

 private:
  explicit CompensationTerm(Variant v) : variant_(v) {}
  Variant variant_;
};

/// eps(r) = eps0 exp(lambda r); requires eps0 > 0 and lambda >= 0.
class IssfGain {
 public:
  IssfGain(double eps0, double lambda);

  double operator()(double r) const;
  double derivative(double r) const;
  double eps0() const { return eps0_; }
  double lambda() const { return lambda_; }

 private:
  double eps0_;
  double lambda_;
};

}  // namespace pbf
