// pbf: run, certify and sweep pendulum safety-filter scenarios, and run the
// acceptance suite. Talks to the library exclusively through the C API.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pbf/pbf.h"

namespace {

enum Exit { kOk = 0, kValidation = 1, kRuntime = 2, kAcceptance = 3 };

struct ScenarioDeleter {
  void operator()(pbf_scenario* s) const { pbf_scenario_free(s); }
};
struct TrajectoryDeleter {
  void operator()(pbf_trajectory* t) const { pbf_trajectory_free(t); }
};
struct CertificateSetDeleter {
  void operator()(pbf_certificate_set* c) const { pbf_certificate_set_free(c); }
};
using ScenarioPtr = std::unique_ptr<pbf_scenario, ScenarioDeleter>;
using TrajectoryPtr = std::unique_ptr<pbf_trajectory, TrajectoryDeleter>;
using CertificateSetPtr = std::unique_ptr<pbf_certificate_set, CertificateSetDeleter>;

int exit_code(pbf_status s) {
  switch (s) {
    case PBF_OK: return kOk;
    case PBF_ERR_VALIDATION:
    case PBF_ERR_INVALID_ARGUMENT:
    case PBF_ERR_IO: return kValidation;
    default: return kRuntime;
  }
}

int report(pbf_status s, const std::string& context) {
  std::cerr << "pbf: " << context << ": " << pbf_status_string(s) << ": "
            << pbf_last_error() << '\n';
  return exit_code(s);
}

struct Overrides {
  std::optional<std::string> dt, horizon, x0, out_dir;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--dt", o.dt, "Integration step [s]");
  cmd->add_option("--horizon", o.horizon, "Simulation horizon [s]");
  cmd->add_option("--x0", o.x0, "Initial state as 'theta,theta_dot'");
  cmd->add_option("--out-dir", o.out_dir, "Output directory");
}

// Loads the config and applies command-line overrides. Returns an exit code on
// failure.
std::optional<int> load(const std::string& path, const Overrides& o, ScenarioPtr& out) {
  pbf_scenario* raw = nullptr;
  if (pbf_status s = pbf_scenario_load(path.c_str(), &raw); s != PBF_OK)
    return report(s, path);
  out.reset(raw);
  const std::pair<const char*, const std::optional<std::string>*> sets[] = {
      {"sim.dt", &o.dt}, {"sim.horizon", &o.horizon}, {"sim.x0", &o.x0},
      {"outputs.dir", &o.out_dir}};
  for (const auto& [key, value] : sets) {
    if (!*value) continue;
    if (pbf_status s = pbf_scenario_set(out.get(), key, (*value)->c_str()); s != PBF_OK)
      return report(s, std::string("override ") + key);
  }
  return std::nullopt;
}

std::string get(const pbf_scenario* s, const char* key) {
  size_t needed = 0;
  pbf_scenario_get(s, key, nullptr, 0, &needed);
  std::string out(needed, '\0');
  pbf_scenario_get(s, key, out.data(), needed + 1, nullptr);
  return out;
}

std::string certificates_text(const pbf_certificate_set* set) {
  size_t needed = 0;
  pbf_certificate_set_to_text(set, nullptr, 0, &needed);
  std::string out(needed, '\0');
  pbf_certificate_set_to_text(set, out.data(), needed + 1, nullptr);
  return out;
}

const char* equation_name(pbf_equation eq) {
  switch (eq) {
    case PBF_EQ_RCBF_UNDER: return "rcbf_under";
    case PBF_EQ_RCBF_OVER: return "rcbf_over";
    case PBF_EQ_ISSF: return "issf";
    case PBF_EQ_ISSF_PBF: return "issf_pbf";
  }
  return "?";
}

// Writes <out>/<name>.certificate.{csv,txt}; prints the text form.
int emit_certificates(const pbf_scenario* scenario, CertificateSetPtr& set) {
  pbf_certificate_set* raw = nullptr;
  if (pbf_status s = pbf_certify(scenario, &raw); s != PBF_OK) return report(s, "certify");
  set.reset(raw);
  const std::string stem = get(scenario, "outputs.dir") + "/" + get(scenario, "scenario.name");
  const std::string text = certificates_text(set.get());
  std::cout << text;
  if (pbf_status s = pbf_certificate_set_write_csv(set.get(), (stem + ".certificate.csv").c_str());
      s != PBF_OK)
    return report(s, "write certificate");
  if (FILE* f = std::fopen((stem + ".certificate.txt").c_str(), "wb")) {
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
  }
  return kOk;
}

int cmd_run(const std::string& path, const Overrides& o) {
  ScenarioPtr scenario;
  if (auto rc = load(path, o, scenario)) return *rc;
  CertificateSetPtr certs;
  if (int rc = emit_certificates(scenario.get(), certs); rc != kOk) return rc;

  pbf_trajectory* raw = nullptr;
  const pbf_status sim_status = pbf_simulate(scenario.get(), &raw);
  TrajectoryPtr traj(raw);
  const std::string csv = get(scenario.get(), "outputs.dir") + "/" +
                          get(scenario.get(), "scenario.name") + ".trajectory.csv";
  if (traj) {
    if (pbf_status s = pbf_trajectory_write_csv(traj.get(), csv.c_str()); s != PBF_OK)
      return report(s, "write trajectory");
  }
  if (sim_status != PBF_OK) return report(sim_status, "simulate (partial trajectory in " + csv + ")");

  pbf_certificate ref{};
  const bool have_ref = pbf_certificate_set_reference(certs.get(), &ref) == PBF_OK;
  pbf_monitor_result m{};
  pbf_trajectory_monitor(traj.get(), have_ref ? ref.h_star : 0.0, 1e-4, &m);
  std::cout.precision(17);
  std::cout << "trajectory: " << csv << '\n';
  std::cout << "min_h = " << m.min_h << " at t = " << m.min_h_time << '\n';
  if (have_ref) {
    std::cout << "h* = " << ref.h_star << " (" << equation_name(ref.equation) << ")\n";
    std::cout << "verdict: " << (m.violated ? "VIOLATED" : "certified bound holds")
              << '\n';
  } else {
    std::cout << "h* = unavailable\nverdict: no certificate\n";
  }
  return kOk;
}

int cmd_certify(const std::string& path, const Overrides& o) {
  ScenarioPtr scenario;
  if (auto rc = load(path, o, scenario)) return *rc;
  CertificateSetPtr certs;
  return emit_certificates(scenario.get(), certs);
}

int cmd_sweep(const std::string& path, const Overrides& o, const std::string& param,
              const std::vector<double>& values) {
  ScenarioPtr scenario;
  if (auto rc = load(path, o, scenario)) return *rc;
  const std::string out_dir = get(scenario.get(), "outputs.dir");
  const std::string aggregate = out_dir + "/sweep_" + param + ".csv";
  if (pbf_status s = pbf_sweep(scenario.get(), param.c_str(), values.data(),
                               values.size(), out_dir.c_str(), aggregate.c_str());
      s != PBF_OK)
    return report(s, "sweep");
  if (FILE* f = std::fopen(aggregate.c_str(), "rb")) {
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) std::fwrite(buf, 1, n, stdout);
    std::fclose(f);
  }
  return kOk;
}

void print_criterion(const pbf_criterion* c, void*) {
  std::printf("[%s] A%d %s: %s\n", c->passed ? "PASS" : "FAIL", c->id, c->name, c->detail);
  std::fflush(stdout);
}

int cmd_verify() {
  int all_passed = 0;
  if (pbf_status s = pbf_verify(print_criterion, nullptr, &all_passed); s != PBF_OK)
    return report(s, "verify");
  std::printf("%s\n", all_passed ? "all acceptance criteria passed"
                                 : "acceptance criteria FAILED");
  return all_passed ? kOk : kAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust CBF safety filters with certified invariant level sets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pbf_version()));

  std::string config;
  Overrides overrides;

  auto* run = app.add_subcommand("run", "Simulate a scenario and check it against its certificate");
  run->add_option("config", config, "Scenario file")->required();
  add_overrides(run, overrides);

  auto* certify = app.add_subcommand("certify", "Compute the certified level h*");
  certify->add_option("config", config, "Scenario file")->required();
  add_overrides(certify, overrides);

  std::string param;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Run one simulation per parameter value");
  sweep->add_option("config", config, "Scenario file")->required();
  sweep->add_option("--param", param, "p_hat, eps0, lambda or F_bar")->required();
  sweep->add_option("--values", values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  add_overrides(sweep, overrides);

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  if (*run) return cmd_run(config, overrides);
  if (*certify) return cmd_certify(config, overrides);
  if (*sweep) return cmd_sweep(config, overrides, param, values);
  if (*verify) return cmd_verify();
  return kValidation;
}
