#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "pbf/pbf.h"

namespace {

namespace fs = std::filesystem;

TEST(CApi, VersionAndStatusStrings) {
  EXPECT_STREQ(pbf_version(), "0.1.0");
  EXPECT_STREQ(pbf_status_string(PBF_OK), "ok");
  EXPECT_NE(std::strlen(pbf_status_string(PBF_ERR_VALIDATION)), 0u);
}

TEST(CApi, NullArgumentsAreRejected) {
  EXPECT_EQ(pbf_scenario_new_default(nullptr), PBF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(pbf_scenario_parse(nullptr, nullptr), PBF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(pbf_certify(nullptr, nullptr), PBF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(pbf_certificate_set_size(nullptr), 0u);
  pbf_scenario_free(nullptr);
  pbf_trajectory_free(nullptr);
  pbf_certificate_set_free(nullptr);
}

TEST(CApi, ValidationErrorCarriesFieldAndLine) {
  pbf_scenario* s = nullptr;
  EXPECT_EQ(pbf_scenario_parse("sim.dt = 0.001\nclass_k.alpha_c = -1\n", &s),
            PBF_ERR_VALIDATION);
  EXPECT_EQ(s, nullptr);
  EXPECT_STREQ(pbf_last_error_field(), "class_k.alpha_c");
  EXPECT_EQ(pbf_last_error_line(), 2);
  EXPECT_NE(std::string(pbf_last_error()).find("class_k.alpha_c"), std::string::npos);
}

TEST(CApi, ScenarioGetSetFollowsSnprintf) {
  pbf_scenario* s = nullptr;
  ASSERT_EQ(pbf_scenario_new_default(&s), PBF_OK);
  ASSERT_EQ(pbf_scenario_set(s, "compensation.p_hat", "0.5"), PBF_OK);
  char small[3];
  size_t needed = 0;
  ASSERT_EQ(pbf_scenario_get(s, "compensation.p_hat", small, sizeof small, &needed), PBF_OK);
  EXPECT_EQ(needed, 3u);
  EXPECT_STREQ(small, "0.");
  char buf[32];
  ASSERT_EQ(pbf_scenario_get(s, "compensation.p_hat", buf, sizeof buf, nullptr), PBF_OK);
  EXPECT_STREQ(buf, "0.5");
  EXPECT_EQ(pbf_scenario_get(s, "no.such", buf, sizeof buf, nullptr), PBF_ERR_VALIDATION);
  EXPECT_EQ(pbf_scenario_set(s, "compensation.eps0", "0"), PBF_ERR_VALIDATION);
  EXPECT_STREQ(pbf_last_error_field(), "compensation.eps0");

  ASSERT_EQ(pbf_scenario_to_text(s, nullptr, 0, &needed), PBF_OK);
  std::string text(needed, '\0');
  ASSERT_EQ(pbf_scenario_to_text(s, text.data(), needed + 1, nullptr), PBF_OK);
  pbf_scenario* back = nullptr;
  ASSERT_EQ(pbf_scenario_parse(text.c_str(), &back), PBF_OK);
  ASSERT_EQ(pbf_scenario_get(back, "compensation.p_hat", buf, sizeof buf, nullptr), PBF_OK);
  EXPECT_STREQ(buf, "0.5");
  pbf_scenario_free(back);
  pbf_scenario_free(s);
}

TEST(CApi, StandaloneSolvers) {
  pbf_certificate c{};
  ASSERT_EQ(pbf_solve_hstar_rcbf(8, 4, 2, 0.5, 1, &c), PBF_OK);
  EXPECT_EQ(c.equation, PBF_EQ_RCBF_UNDER);
  EXPECT_EQ(c.available, 1);
  EXPECT_NEAR(c.h_star, -0.6701887554767308, 1e-10);
  ASSERT_EQ(pbf_solve_hstar_rcbf(8, 4, 2, 2, 1, &c), PBF_OK);
  EXPECT_EQ(c.equation, PBF_EQ_RCBF_OVER);
  EXPECT_NEAR(c.h_star, 0.33934636136226376, 1e-10);
  ASSERT_EQ(pbf_solve_hstar_issf(8, 1, 4, 1, &c), PBF_OK);
  EXPECT_NEAR(c.h_star, -0.027945027233197157, 1e-10);
  ASSERT_EQ(pbf_solve_hstar_issf_pbf(8, 4, 2, 1, 0, 1, &c), PBF_OK);
  EXPECT_NEAR(c.h_star, 0.453465355942774, 1e-10);
  EXPECT_EQ(pbf_solve_hstar_rcbf(-1, 4, 2, 1, 1, &c), PBF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(pbf_solve_hstar_issf_pbf(8, 4, 2, 1, 0, 100, &c),
            PBF_ERR_CERTIFICATE_UNAVAILABLE);
}

TEST(CApi, CertifyAndCsvRoundTrip) {
  pbf_scenario* s = nullptr;
  ASSERT_EQ(pbf_scenario_parse("compensation.variant = issf\n", &s), PBF_OK);
  pbf_certificate_set* set = nullptr;
  ASSERT_EQ(pbf_certify(s, &set), PBF_OK);
  ASSERT_EQ(pbf_certificate_set_size(set), 2u);
  pbf_certificate ref{};
  ASSERT_EQ(pbf_certificate_set_reference(set, &ref), PBF_OK);
  EXPECT_EQ(ref.equation, PBF_EQ_ISSF_PBF);
  pbf_certificate c{};
  EXPECT_EQ(pbf_certificate_set_get(set, 2, &c), PBF_ERR_INVALID_ARGUMENT);

  const fs::path path = fs::temp_directory_path() / "pbf_capi_test" / "cert.csv";
  fs::remove_all(path.parent_path());
  ASSERT_EQ(pbf_certificate_set_write_csv(set, path.c_str()), PBF_OK);
  pbf_certificate_set* back = nullptr;
  ASSERT_EQ(pbf_certificate_set_read_csv(path.c_str(), &back), PBF_OK);
  ASSERT_EQ(pbf_certificate_set_size(back), 2u);
  for (size_t i = 0; i < 2; ++i) {
    pbf_certificate a{}, b{};
    pbf_certificate_set_get(set, i, &a);
    pbf_certificate_set_get(back, i, &b);
    EXPECT_EQ(a.equation, b.equation);
    EXPECT_EQ(a.h_star, b.h_star);
    EXPECT_STREQ(a.note, b.note);
  }
  EXPECT_EQ(pbf_certificate_set_read_csv("/nonexistent/cert.csv", &back), PBF_ERR_IO);
  pbf_certificate_set_free(back);
  pbf_certificate_set_free(set);
  pbf_scenario_free(s);
}

TEST(CApi, SafetyFilter) {
  pbf_scenario* s = nullptr;
  ASSERT_EQ(pbf_scenario_new_default(&s), PBF_OK);
  const double x[2] = {0.25, 0.0};
  pbf_filter_result r{};
  ASSERT_EQ(pbf_safety_filter(s, 0.0, x, -5.248079185090458, &r), PBF_OK);
  EXPECT_EQ(r.feasible, 1);
  ASSERT_EQ(pbf_safety_filter(s, 0.0, x, -1000.0, &r), PBF_OK);
  EXPECT_EQ(r.active, 0);
  EXPECT_EQ(r.u, -1000.0);
  const double origin[2] = {0.0, 0.0};
  ASSERT_EQ(pbf_scenario_set(s, "compensation.variant", "none"), PBF_OK);
  ASSERT_EQ(pbf_safety_filter(s, 0.0, origin, 0.0, &r), PBF_OK);
  EXPECT_EQ(r.active, 0);
  pbf_scenario_free(s);
}

TEST(CApi, SimulateMonitorAndWrite) {
  pbf_scenario* s = nullptr;
  ASSERT_EQ(pbf_scenario_parse("compensation.p_hat = 2\nsim.horizon = 6\n", &s), PBF_OK);
  pbf_trajectory* t = nullptr;
  ASSERT_EQ(pbf_simulate(s, &t), PBF_OK);
  ASSERT_GT(pbf_trajectory_size(t), 6000u);
  pbf_sample first{};
  ASSERT_EQ(pbf_trajectory_sample(t, 0, &first), PBF_OK);
  EXPECT_EQ(first.t, 0.0);
  EXPECT_EQ(first.h, 1.0);
  pbf_monitor_result m{};
  ASSERT_EQ(pbf_trajectory_monitor(t, 0.33934636136226376, 1e-4, &m), PBF_OK);
  EXPECT_EQ(m.violated, 0);
  EXPECT_GE(m.min_h, 0.0);
  EXPECT_EQ(pbf_trajectory_sample(t, pbf_trajectory_size(t), &first), PBF_ERR_INVALID_ARGUMENT);
  const fs::path path = fs::temp_directory_path() / "pbf_capi_test" / "traj.csv";
  ASSERT_EQ(pbf_trajectory_write_csv(t, path.c_str()), PBF_OK);
  EXPECT_TRUE(fs::exists(path));
  pbf_trajectory_free(t);
  pbf_scenario_free(s);
}

TEST(CApi, SweepWritesAggregate) {
  pbf_scenario* s = nullptr;
  ASSERT_EQ(pbf_scenario_parse("sim.horizon = 6\n", &s), PBF_OK);
  const fs::path dir = fs::temp_directory_path() / "pbf_capi_sweep";
  fs::remove_all(dir);
  const double values[] = {0.5, 2.0};
  const std::string agg = (dir / "agg.csv").string();
  ASSERT_EQ(pbf_sweep(s, "p_hat", values, 2, dir.c_str(), agg.c_str()), PBF_OK);
  EXPECT_TRUE(fs::exists(agg));
  EXPECT_TRUE(fs::exists(dir / "sweep_p_hat_1.csv"));
  EXPECT_EQ(pbf_sweep(s, "p_hat", values, 0, nullptr, nullptr), PBF_ERR_VALIDATION);
  EXPECT_EQ(pbf_sweep(s, "mass", values, 2, nullptr, nullptr), PBF_ERR_VALIDATION);
  pbf_scenario_free(s);
}

}  // namespace
