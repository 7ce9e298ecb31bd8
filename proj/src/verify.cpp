#include "pbf/verify.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <sstream>

#include "pbf/filter.hpp"
#include "pbf/oracle.hpp"
#include "pbf/scenario.hpp"

namespace pbf {

namespace {

constexpr double kMonitorTol = 1e-4;

// Benchmark pendulum scenario: default parameters, x0 = 0, dt = 1e-3, 20 s.
ScenarioConfig benchmark(CompensationKind kind) {
  ScenarioConfig cfg;
  cfg.compensation = kind;
  cfg.x0 = Eigen::Vector2d::Zero();
  cfg.dt = 1e-3;
  cfg.horizon = 20.0;
  return cfg;
}

double run_min_h(const ScenarioConfig& cfg) {
  return simulate(cfg.simulation_setup()).min_h();
}

// Eigenvalues of A via Eigen's iterative solver, independent of the closed
// form cached by QuadraticBarrier.
Eigen::Vector2d reference_eigenvalues(double q1, double q2) {
  Eigen::Matrix2d A;
  A << 2 * q1 * q1, q1 * q2, q1 * q2, 2 * q2 * q2;
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(A).eigenvalues();
}

class Report {
 public:
  void check(bool ok, const std::string& what) {
    passed_ = passed_ && ok;
    if (!ok) detail_ << "FAILED " << what << "; ";
  }
  template <class T>
  Report& note(const std::string& key, const T& value) {
    detail_ << key << " = " << value << "; ";
    return *this;
  }
  bool passed() const { return passed_; }
  std::string detail() const {
    std::string d = detail_.str();
    if (d.size() >= 2) d.resize(d.size() - 2);
    return d;
  }

 private:
  bool passed_ = true;
  std::ostringstream detail_;
};

// Certificate for the p_hat-estimate compensation plus its sign-scan oracle.
void rcbf_certificate_checks(Report& r, double p_hat, double expected,
                             LevelSetCertificate& cert) {
  const ScenarioConfig cfg = benchmark(CompensationKind::RobustBound);
  const double p = cfg.uncertainty_bound();
  const QuadraticBarrier barrier = QuadraticBarrier::from_weights(cfg.q1, cfg.q2);
  cert = solve_hstar_rcbf(LinearClassKe(cfg.alpha_c), delta_bounds_quadratic(barrier),
                          p_hat, p);
  r.note("h*", cert.h_star).note("residual", cert.residual);
  r.check(cert.residual <= 1e-10, "residual <= 1e-10");

  const Eigen::Vector2d lam = reference_eigenvalues(cfg.q1, cfg.q2);
  const double lam_used = p_hat < p ? lam(1) : lam(0);
  auto f = [&](double h) {
    return cfg.alpha_c * h - std::sqrt(2.0 * lam_used * (1.0 - h)) * (p_hat - p);
  };
  const auto roots = oracle::sign_scan_roots(f, -5.0, 1.0 - 1e-12, 1000000);
  r.check(roots.size() == 1, "sign scan finds exactly one root");
  if (!roots.empty()) {
    r.note("oracle", roots.front());
    r.check(std::abs(roots.front() - cert.h_star) <= 1e-5, "|h* - oracle| <= 1e-5");
  }
  r.check(std::abs(cert.h_star - expected) <= 1e-3, "h* near expected value");
}

CriterionResult robust_safety() {
  Report r;
  ScenarioConfig cfg = benchmark(CompensationKind::RobustBound);
  cfg.p_hat = cfg.uncertainty_bound();
  const double min_h = run_min_h(cfg);
  cfg.dt = 0.5e-3;
  const double min_h_half = run_min_h(cfg);
  r.note("min_h", min_h).note("min_h(dt/2)", min_h_half);
  r.check(min_h >= -kMonitorTol, "min_h >= -1e-4");
  r.check(std::abs(min_h - min_h_half) <= 1e-5, "|min_h(dt) - min_h(dt/2)| <= 1e-5");
  return {1, "robust safety with p_hat = p", r.passed(), r.detail()};
}

CriterionResult safety_degradation() {
  Report r;
  LevelSetCertificate cert;
  rcbf_certificate_checks(r, 0.5, -0.670, cert);
  r.check(cert.equation == CertificateEquation::RcbfUnder, "rcbf_under branch");
  ScenarioConfig cfg = benchmark(CompensationKind::RobustBound);
  cfg.p_hat = 0.5;
  const double min_h = run_min_h(cfg);
  r.note("min_h", min_h).note("leaves S (min_h < 0)", min_h < 0.0 ? "yes" : "no");
  r.check(min_h >= cert.h_star - kMonitorTol, "min_h >= h* - 1e-4");
  return {2, "safety degradation quantified (p_hat = p/2)", r.passed(), r.detail()};
}

CriterionResult conservativeness() {
  Report r;
  LevelSetCertificate cert;
  rcbf_certificate_checks(r, 2.0, 0.340, cert);
  r.check(cert.equation == CertificateEquation::RcbfOver, "rcbf_over branch");
  ScenarioConfig cfg = benchmark(CompensationKind::RobustBound);
  cfg.p_hat = 2.0;
  const double min_h = run_min_h(cfg);
  r.note("min_h", min_h);
  r.check(min_h >= cert.h_star - kMonitorTol, "min_h >= h* - 1e-4");
  r.check(min_h >= 0.0, "trajectory stays in S");
  return {3, "conservativeness quantified (p_hat = 2p)", r.passed(), r.detail()};
}

CriterionResult issf_certificate() {
  Report r;
  const ScenarioConfig cfg = benchmark(CompensationKind::Issf);
  const double p = cfg.uncertainty_bound();
  const LinearClassKe alpha(cfg.alpha_c);

  const auto flat = solve_hstar_issf(alpha, 1.0, 0.0, p);
  const double closed = -1.0 * p * p / (4.0 * cfg.alpha_c);
  r.note("h*(lambda=0)", flat.h_star).note("closed form", closed);
  r.check(std::abs(flat.h_star - closed) <= 1e-10, "lambda = 0 matches -eps0 p^2/(4 alpha_c)");

  const auto tuned = solve_hstar_issf(alpha, 1.0, 4.0, p);
  const auto fp = oracle::fixed_point(
      [&](double h) { return -std::exp(4.0 * h) * p * p / (4.0 * cfg.alpha_c); }, 0.0);
  r.note("h*(lambda=4)", tuned.h_star);
  r.check(fp.has_value(), "fixed-point iteration converges");
  if (fp) {
    r.note("fixed point", *fp);
    r.check(std::abs(tuned.h_star - *fp) <= 1e-10, "bisection matches fixed point");
  }
  r.check(std::abs(tuned.h_star + 0.02795) <= 1e-5, "lambda = 4 near -0.02795");
  r.check(flat.h_star < 0.0 && tuned.h_star < 0.0, "h* < 0");
  return {4, "ISSf certificate", r.passed(), r.detail()};
}

CriterionResult pbf_tightens_issf() {
  Report r;
  double min_h[2] = {0.0, 0.0};
  const double lambdas[2] = {0.0, 4.0};
  for (int i = 0; i < 2; ++i) {
    ScenarioConfig cfg = benchmark(CompensationKind::Issf);
    cfg.eps0 = 1.0;
    cfg.lambda = lambdas[i];
    const double p = cfg.uncertainty_bound();
    const LinearClassKe alpha(cfg.alpha_c);
    const QuadraticBarrier barrier = QuadraticBarrier::from_weights(cfg.q1, cfg.q2);
    const auto issf = solve_hstar_issf(alpha, cfg.eps0, cfg.lambda, p);
    const auto pbf = solve_hstar_issf_pbf(alpha, delta_bounds_quadratic(barrier),
                                          cfg.eps0, cfg.lambda, p);
    const std::string tag = "[lambda=" + std::to_string(static_cast<int>(lambdas[i])) + "] ";
    r.note(tag + "issf h*", issf.h_star).note(tag + "issf_pbf h*", pbf.h_star);
    r.check(pbf.h_star > issf.h_star, tag + "issf_pbf h* > issf h*");

    const Eigen::Vector2d lam = reference_eigenvalues(cfg.q1, cfg.q2);
    const double delta_lo = std::sqrt(2.0 * lam(0) * (1.0 - pbf.h_star));
    const double eps = cfg.eps0 * std::exp(cfg.lambda * pbf.h_star);
    r.check(eps <= 2.0 * delta_lo / p && pbf.conditions_ok,
            tag + "eps(h*) <= 2 delta_lo(h*)/p");

    min_h[i] = run_min_h(cfg);
    r.note(tag + "min_h", min_h[i]);
    r.check(min_h[i] >= pbf.h_star - kMonitorTol, tag + "min_h >= issf_pbf h* - 1e-4");
  }
  r.check(min_h[1] < min_h[0], "min_h(lambda=4) < min_h(lambda=0)");
  return {5, "PBF tightens the ISSf guarantee", r.passed(), r.detail()};
}

CriterionResult filter_optimality() {
  Report r;
  const ScenarioConfig cfg = benchmark(CompensationKind::RobustBound);
  const StepDisturbance dist(cfg.plant.F_bar, cfg.step_times);
  const auto sys = pendulum_system(cfg.plant, dist);
  const QuadraticBarrier barrier = QuadraticBarrier::from_weights(cfg.q1, cfg.q2);
  const LinearClassKe alpha(cfg.alpha_c);

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> angle(-0.5, 0.5), rate(-1.5, 1.5),
      p_hat(0.0, 3.0), u_dist(-40.0, 40.0), time(0.0, 20.0);
  int instances = 0, attempts = 0;
  double worst_gap = 0.0, worst_slack = 0.0;
  while (instances < 1000 && attempts < 1000000) {
    ++attempts;
    Vector x(2);
    x << angle(rng), rate(rng);
    Vector u_des(1);
    u_des << u_dist(rng);
    const auto sigma = CompensationTerm::robust_bound(p_hat(rng));
    const double t = time(rng);
    const SafetyConstraint c = safety_constraint(sys, barrier, alpha, sigma, t, x);
    const FilterResult res = safety_filter(sys, barrier, alpha, sigma, t, x, u_des);
    if (!res.feasible || !res.active || std::abs(res.u(0)) > 99.0) continue;
    ++instances;
    const auto grid = oracle::grid_search_filter(c.a(0), c.b0, u_des(0), -100.0, 100.0, 1e-4);
    const double gap = grid ? std::abs(*grid - res.u(0)) : INFINITY;
    worst_gap = std::max(worst_gap, gap);
    worst_slack = std::min(worst_slack, c.a.dot(res.u) - c.b0);
  }
  r.note("instances", instances).note("max |u - u_grid|", worst_gap)
      .note("min residual", worst_slack);
  r.check(instances == 1000, "1000 active instances generated");
  r.check(worst_gap <= 1e-3, "matches grid search within 1e-3");
  r.check(worst_slack >= -1e-9, "constraint residual >= -1e-9");
  return {6, "filter optimality oracle", r.passed(), r.detail()};
}

CriterionResult inequality_suite() {
  Report r;
  const ScenarioConfig cfg = benchmark(CompensationKind::RobustBound);
  const StepDisturbance dist(cfg.plant.F_bar, cfg.step_times);
  const auto sys = pendulum_system(cfg.plant, dist);
  const QuadraticBarrier barrier = QuadraticBarrier::from_weights(cfg.q1, cfg.q2);
  const double p = cfg.uncertainty_bound();

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-1.5, 1.5), eps0(0.05, 5.0),
      lambda(0.0, 5.0), time(0.0, 20.0), scale(1.0, 3.0), u_dist(-50.0, 50.0);

  int squares_violations = 0;
  for (int i = 0; i < 10000; ++i) {
    Vector x(2);
    x << coord(rng), coord(rng);
    const double e0 = eps0(rng), lam = lambda(rng);
    const double eps = IssfGain(e0, lam)(barrier.eval(x));
    const double sigma = CompensationTerm::issf(e0, lam).eval(barrier, 0.0, x);
    const double lhs = sigma - barrier.grad(x).norm() * p;
    if (lhs < -eps * p * p / 4.0 - 1e-12) ++squares_violations;
  }

  int sufficiency_violations = 0;
  for (int i = 0; i < 10000; ++i) {
    Vector x(2);
    x << coord(rng), coord(rng);
    Vector u(1);
    u << u_dist(rng);
    const double t = time(rng);
    const auto sigma = CompensationTerm::robust_bound(p * scale(rng));
    const RowVector dh = barrier.grad(x);
    const double lhs = dh.dot(sys.f_tilde(t, x)) + (dh * sys.g_tilde(t, x) * u)(0) +
                       sigma.eval(barrier, t, x, u);
    if (lhs < -1e-12) ++sufficiency_violations;
  }
  r.note("completion-of-squares violations", squares_violations)
      .note("compensation sufficiency violations", sufficiency_violations);
  r.check(squares_violations == 0, "completion of squares holds");
  r.check(sufficiency_violations == 0, "compensation sufficiency holds");
  return {7, "inequality suite", r.passed(), r.detail()};
}

CriterionResult gradient_sandwich() {
  Report r;
  const ScenarioConfig cfg = benchmark(CompensationKind::RobustBound);
  const QuadraticBarrier barrier = QuadraticBarrier::from_weights(cfg.q1, cfg.q2);
  const GradientNormBounds d = delta_bounds_quadratic(barrier);
  int points = 0, violations = 0;
  double worst_level_error = 0.0;
  for (int level = 0; level < 20; ++level) {
    const double h_star = -5.0 + level * (5.95 / 19.0);
    for (int k = 0; k < 50; ++k) {
      const double theta = 2.0 * M_PI * k / 50.0;
      const Eigen::Vector2d x = barrier.level_set_point(h_star, theta);
      const double norm = barrier.grad(x).norm();
      worst_level_error = std::max(worst_level_error, std::abs(barrier.eval(x) - h_star));
      if (norm < d.lo(h_star) - 1e-9 || norm > d.hi(h_star) + 1e-9) ++violations;
      ++points;
    }
  }
  r.note("points", points).note("violations", violations)
      .note("max |h(x) - h*|", worst_level_error);
  r.check(points == 1000, "1000 boundary points");
  r.check(violations == 0, "delta_lo <= ||grad h|| <= delta_hi");
  r.check(worst_level_error <= 1e-9, "samples lie on the level set");
  return {8, "gradient-norm sandwich on level sets", r.passed(), r.detail()};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(
    const std::function<void(const CriterionResult&)>& on_result) {
  using Check = CriterionResult (*)();
  const Check checks[] = {robust_safety,      safety_degradation, conservativeness,
                          issf_certificate,   pbf_tightens_issf,  filter_optimality,
                          inequality_suite,   gradient_sandwich};
  const char* names[] = {"robust safety with p_hat = p",
                         "safety degradation quantified (p_hat = p/2)",
                         "conservativeness quantified (p_hat = 2p)",
                         "ISSf certificate",
                         "PBF tightens the ISSf guarantee",
                         "filter optimality oracle",
                         "inequality suite",
                         "gradient-norm sandwich on level sets"};
  std::vector<CriterionResult> results;
  for (int i = 0; i < 8; ++i) {
    CriterionResult res;
    try {
      res = checks[i]();
    } catch (const std::exception& e) {
      res = {i + 1, names[i], false, std::string("exception: ") + e.what()};
    }
    if (on_result) on_result(res);
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace pbf
