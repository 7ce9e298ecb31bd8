#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pbf/error.hpp"
#include "pbf/report.hpp"
#include "pbf/scenario.hpp"
#include "pbf/sweep.hpp"

namespace pbf {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pbf_scenario_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(ScenarioConfig, DefaultsAreBenchmarkParameters) {
  const ScenarioConfig c = parse_scenario("");
  EXPECT_EQ(c.plant.grav, 10.0);
  EXPECT_EQ(c.plant.mass, 2.0);
  EXPECT_EQ(c.plant.length, 1.0);
  EXPECT_EQ(c.plant.F_bar, 2.0);
  EXPECT_EQ(c.q1, 4.0);
  EXPECT_EQ(c.q2, 2.0);
  EXPECT_EQ(c.alpha_c, 8.0);
  EXPECT_EQ(c.plant.Kp, 0.6);
  EXPECT_EQ(c.plant.Kd, 0.6);
  EXPECT_EQ(c.step_times, (std::vector<double>{5, 10, 15}));
  EXPECT_EQ(c.dt, 1e-3);
  EXPECT_EQ(c.horizon, 20.0);
  EXPECT_EQ(c.x0, Eigen::Vector2d::Zero());
  EXPECT_EQ(c.uncertainty_bound(), 1.0);
}

TEST(ScenarioConfig, ParsesKeysAndComments) {
  const ScenarioConfig c = parse_scenario(
      "# comment\n"
      "scenario.name = trial  # trailing\n"
      "compensation.variant = issf\n"
      "compensation.eps0 = 0.5\n"
      "compensation.lambda = 4\n"
      "sim.x0 = 0.1, -0.2\n"
      "disturbance.step_times =\n");
  EXPECT_EQ(c.name, "trial");
  EXPECT_EQ(c.compensation, CompensationKind::Issf);
  EXPECT_EQ(c.eps0, 0.5);
  EXPECT_EQ(c.lambda, 4.0);
  EXPECT_EQ(c.x0, Eigen::Vector2d(0.1, -0.2));
  EXPECT_TRUE(c.step_times.empty());
}

void expect_validation(const std::string& text, const std::string& field, int line) {
  try {
    parse_scenario(text);
    FAIL() << "accepted: " << text;
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), field) << e.what();
    EXPECT_EQ(e.line(), line) << e.what();
  }
}

TEST(ScenarioConfig, ValidationNamesFieldAndLine) {
  expect_validation("\nclass_k.alpha_c = -1\n", "class_k.alpha_c", 2);
  expect_validation("compensation.eps0 = 0\n", "compensation.eps0", 1);
  expect_validation("compensation.lambda = -0.5\n", "compensation.lambda", 1);
  expect_validation("sim.dt = 0\n", "sim.dt", 1);
  expect_validation("plant.mass = abc\n", "plant.mass", 1);
  expect_validation("sim.dt = nan\n", "sim.dt", 1);
  expect_validation("plant.bogus = 1\n", "plant.bogus", 1);
  expect_validation("sim.dt = 1\nsim.dt = 2\n", "sim.dt", 2);
  expect_validation("sim.x0 = 1\n", "sim.x0", 1);
  expect_validation("compensation.variant = magic\n", "compensation.variant", 1);
  expect_validation("a b c\n", "", 1);
  expect_validation("disturbance.step_times = 10, 5\n", "disturbance.step_times", 1);
}

TEST(ScenarioConfig, EpsilonErrorMentionsRequirement) {
  try {
    parse_scenario("compensation.eps0 = 0");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("eps > 0"), std::string::npos);
  }
}

TEST(ScenarioConfig, TextRoundTrip) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> pos(0.1, 10.0), x(-0.3, 0.3);
  std::uniform_int_distribution<int> kind(0, 2);
  for (int i = 0; i < 50; ++i) {
    ScenarioConfig c;
    c.plant.mass = pos(rng);
    c.plant.F_bar = pos(rng);
    c.q1 = pos(rng);
    c.alpha_c = pos(rng);
    c.compensation = static_cast<CompensationKind>(kind(rng));
    c.p_hat = pos(rng);
    c.eps0 = pos(rng);
    c.lambda = pos(rng);
    c.x0 = Eigen::Vector2d(x(rng), x(rng));
    c.dt = pos(rng) * 1e-4;
    const ScenarioConfig back = parse_scenario(c.to_text());
    EXPECT_EQ(back.to_text(), c.to_text());
    EXPECT_EQ(back.plant.mass, c.plant.mass);
    EXPECT_EQ(back.x0, c.x0);
    EXPECT_EQ(back.dt, c.dt);
  }
}

TEST(ScenarioConfig, OverridesRevalidate) {
  ScenarioConfig c;
  apply_override(c, "sim.dt", "0.002");
  EXPECT_EQ(c.dt, 0.002);
  EXPECT_THROW(apply_override(c, "sim.dt", "-1"), ValidationError);
  EXPECT_EQ(c.dt, 0.002);
}

TEST(ScenarioConfig, LoadMissingFile) {
  EXPECT_THROW(load_scenario("/nonexistent/scenario.cfg"), IoError);
}

TEST(Certify, RobustBranches) {
  ScenarioConfig c;
  c.p_hat = 0.5;
  auto out = certify(c);
  ASSERT_EQ(out.size(), 1u);
  ASSERT_TRUE(out[0].certificate);
  EXPECT_EQ(out[0].equation, CertificateEquation::RcbfUnder);
  EXPECT_NEAR(out[0].certificate->h_star, -0.6701887554767308, 1e-10);

  c.p_hat = 1.0;
  out = certify(c);
  EXPECT_EQ(out[0].certificate->h_star, 0.0);

  c.compensation = CompensationKind::None;
  out = certify(c);
  EXPECT_EQ(out[0].equation, CertificateEquation::RcbfUnder);
  EXPECT_NE(out[0].certificate->annotation.find("no compensation"), std::string::npos);
}

TEST(Certify, IssfPair) {
  ScenarioConfig c;
  c.compensation = CompensationKind::Issf;
  const auto out = certify(c);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_NEAR(out[0].certificate->h_star, -0.03125, 1e-12);
  EXPECT_NEAR(out[1].certificate->h_star, 0.453465355942774, 1e-10);
  const auto ref = reference_certificate(out);
  ASSERT_TRUE(ref);
  EXPECT_EQ(ref->equation, CertificateEquation::IssfPbf);
}

TEST(Certify, UnavailableReportedWithoutAborting) {
  ScenarioConfig c;
  c.compensation = CompensationKind::Issf;
  c.plant.F_bar = 200.0;
  const auto out = certify(c);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_TRUE(out[0].certificate);
  EXPECT_FALSE(out[1].certificate);
  EXPECT_FALSE(out[1].error.empty());
  EXPECT_EQ(reference_certificate(out)->equation, CertificateEquation::Issf);
}

TEST(Report, CertificateCsvRoundTrip) {
  ScenarioConfig c;
  c.compensation = CompensationKind::Issf;
  auto outcomes = certify(c);
  outcomes.push_back({CertificateEquation::RcbfOver, std::nullopt, "no sign change, \"quoted\""});
  std::stringstream ss;
  write_certificate_csv(ss, outcomes);
  const auto back = read_certificate_csv(ss);
  ASSERT_EQ(back.size(), outcomes.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].equation, outcomes[i].equation);
    EXPECT_EQ(back[i].error, outcomes[i].error);
    ASSERT_EQ(back[i].certificate.has_value(), outcomes[i].certificate.has_value());
    if (back[i].certificate) {
      EXPECT_EQ(back[i].certificate->h_star, outcomes[i].certificate->h_star);
      EXPECT_EQ(back[i].certificate->residual, outcomes[i].certificate->residual);
      EXPECT_EQ(back[i].certificate->annotation, outcomes[i].certificate->annotation);
    }
  }
  std::stringstream bad("equation,h_star\n");
  EXPECT_THROW(read_certificate_csv(bad), IoError);
}

TEST(Report, TrajectoryCsvIsLosslessAndDeterministic) {
  ScenarioConfig c;
  c.horizon = 6.0;
  const Trajectory traj = simulate(c.simulation_setup());
  std::stringstream first, second;
  write_trajectory_csv(first, traj);
  write_trajectory_csv(second, simulate(c.simulation_setup()));
  EXPECT_EQ(first.str(), second.str());

  std::string header;
  std::getline(first, header);
  EXPECT_EQ(header, "t,x1,x2,u,F,h,sigma,constraint_residual");
  first.seekg(0);
  const auto samples = read_trajectory_csv(first);
  ASSERT_EQ(samples.size(), traj.samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(samples[i].t, traj.samples[i].t);
    EXPECT_EQ(samples[i].x, traj.samples[i].x);
    EXPECT_EQ(samples[i].u, traj.samples[i].u);
    EXPECT_EQ(samples[i].constraint_residual, traj.samples[i].constraint_residual);
  }
}

TEST(Report, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> v(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = v(rng);
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(Report, AtomicWriteLeavesNoTemporaries) {
  const fs::path dir = scratch_dir("atomic");
  const std::string path = (dir / "nested" / "file.txt").string();
  write_file_atomic(path, "one");
  write_file_atomic(path, "two");
  std::ifstream in(path);
  std::string contents;
  std::getline(in, contents);
  EXPECT_EQ(contents, "two");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir / "nested"), fs::directory_iterator{}), 1);
}

TEST(Sweep, MatchesIndividualRuns) {
  ScenarioConfig base;
  const fs::path dir = scratch_dir("sweep");
  const std::vector<double> values{0.5, 1.0, 2.0};
  const auto rows = run_sweep(base, SweepParameter::PHat, values, dir.string());
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < values.size(); ++i) {
    ScenarioConfig single = base;
    single.p_hat = values[i];
    EXPECT_EQ(rows[i].value, values[i]);
    EXPECT_EQ(rows[i].min_h, simulate(single.simulation_setup()).min_h());
    EXPECT_EQ(*rows[i].h_star_rcbf, certify(single)[0].certificate->h_star);
    EXPECT_FALSE(rows[i].violated);
    EXPECT_EQ(rows[i].status, "ok");
    EXPECT_TRUE(fs::exists(dir / ("sweep_p_hat_" + std::to_string(i) + ".csv")));
  }
  EXPECT_LT(rows[0].h_star_rcbf.value(), 0.0);
  EXPECT_EQ(rows[1].h_star_rcbf.value(), 0.0);
  EXPECT_GT(rows[2].h_star_rcbf.value(), 0.0);
  EXPECT_LT(rows[0].min_h, rows[1].min_h);
  EXPECT_LT(rows[1].min_h, rows[2].min_h);

  std::stringstream csv;
  write_sweep_csv(csv, SweepParameter::PHat, rows);
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "p_hat,h_star_rcbf,h_star_issf,h_star_issf_pbf,h_star_ref,min_h,violated,status");
}

TEST(Sweep, LambdaPairAndSingleValue) {
  ScenarioConfig base;
  base.compensation = CompensationKind::Issf;
  const auto rows = run_sweep(base, SweepParameter::Lambda, {0.0, 4.0});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_LT(rows[1].min_h, rows[0].min_h);
  EXPECT_GT(*rows[0].h_star_issf_pbf, *rows[0].h_star_issf);
  EXPECT_EQ(rows[0].h_star_ref, *rows[0].h_star_issf_pbf);

  const auto single = run_sweep(base, SweepParameter::Lambda, {4.0});
  EXPECT_EQ(single[0].min_h, rows[1].min_h);
}

TEST(Sweep, RejectsBadRanges) {
  ScenarioConfig base;
  EXPECT_THROW(run_sweep(base, SweepParameter::PHat, {}), ValidationError);
  EXPECT_THROW(run_sweep(base, SweepParameter::PHat, {1.0, INFINITY}), ValidationError);
  EXPECT_THROW(run_sweep(base, SweepParameter::Eps0, {0.0}), ValidationError);
  EXPECT_THROW(sweep_parameter_from_string("mass"), ValidationError);
}

}  // namespace
}  // namespace pbf
