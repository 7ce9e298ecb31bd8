#include "pbf/pbf.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "pbf/error.hpp"
#include "pbf/filter.hpp"
#include "pbf/report.hpp"
#include "pbf/scenario.hpp"
#include "pbf/sweep.hpp"
#include "pbf/verify.hpp"

struct pbf_scenario {
  pbf::ScenarioConfig config;
};

struct pbf_trajectory {
  pbf::Trajectory traj;
};

struct pbf_certificate_set {
  std::vector<pbf::CertificateOutcome> outcomes;
};

namespace {

struct LastError {
  std::string message;
  std::string field;
  int line = 0;
};

thread_local LastError last_error;

pbf_status to_status(pbf::ErrorCode code) {
  switch (code) {
    case pbf::ErrorCode::InvalidArgument: return PBF_ERR_INVALID_ARGUMENT;
    case pbf::ErrorCode::Validation: return PBF_ERR_VALIDATION;
    case pbf::ErrorCode::Infeasible: return PBF_ERR_INFEASIBLE;
    case pbf::ErrorCode::Integration: return PBF_ERR_INTEGRATION;
    case pbf::ErrorCode::CertificateUnavailable: return PBF_ERR_CERTIFICATE_UNAVAILABLE;
    case pbf::ErrorCode::InvariantFailure: return PBF_ERR_INVARIANT;
    case pbf::ErrorCode::Io: return PBF_ERR_IO;
  }
  return PBF_ERR_INTERNAL;
}

pbf_status fail(pbf_status status, const std::string& message) {
  last_error = {message, {}, 0};
  return status;
}

template <class Fn>
pbf_status guarded(Fn&& fn) {
  try {
    last_error = {};
    return fn();
  } catch (const pbf::ValidationError& e) {
    last_error = {e.what(), e.field(), e.line()};
    return PBF_ERR_VALIDATION;
  } catch (const pbf::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(PBF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PBF_ERR_INTERNAL, "unknown error");
  }
}

pbf_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size();
  if (buf && cap > 0) {
    const size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return PBF_OK;
}

void fill(const pbf::CertificateOutcome& o, pbf_certificate* out) {
  *out = pbf_certificate{};
  out->equation = static_cast<pbf_equation>(o.equation);
  const std::string* note = &o.error;
  if (o.certificate) {
    out->available = 1;
    out->h_star = o.certificate->h_star;
    out->residual = o.certificate->residual;
    out->conditions_ok = o.certificate->conditions_ok;
    out->regular = o.certificate->regular;
    note = &o.certificate->annotation;
  }
  copy_out(*note, out->note, PBF_NOTE_CAPACITY, nullptr);
}

void fill(const pbf::LevelSetCertificate& c, pbf_certificate* out) {
  fill(pbf::CertificateOutcome{c.equation, c, {}}, out);
}

#define PBF_REQUIRE(cond, what) \
  if (!(cond)) return fail(PBF_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* pbf_version(void) { return "0.1.0"; }

const char* pbf_status_string(pbf_status status) {
  switch (status) {
    case PBF_OK: return "ok";
    case PBF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PBF_ERR_VALIDATION: return "validation error";
    case PBF_ERR_INFEASIBLE: return "safety filter infeasible";
    case PBF_ERR_INTEGRATION: return "integration failure";
    case PBF_ERR_CERTIFICATE_UNAVAILABLE: return "certificate unavailable";
    case PBF_ERR_INVARIANT: return "invariant failure";
    case PBF_ERR_IO: return "i/o error";
    case PBF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* pbf_last_error(void) { return last_error.message.c_str(); }
const char* pbf_last_error_field(void) { return last_error.field.c_str(); }
int pbf_last_error_line(void) { return last_error.line; }

pbf_status pbf_scenario_new_default(pbf_scenario** out) {
  PBF_REQUIRE(out, "out must not be NULL");
  return guarded([&] {
    *out = new pbf_scenario{};
    return PBF_OK;
  });
}

pbf_status pbf_scenario_parse(const char* text, pbf_scenario** out) {
  PBF_REQUIRE(text && out, "text and out must not be NULL");
  return guarded([&] {
    *out = new pbf_scenario{pbf::parse_scenario(text)};
    return PBF_OK;
  });
}

pbf_status pbf_scenario_load(const char* path, pbf_scenario** out) {
  PBF_REQUIRE(path && out, "path and out must not be NULL");
  return guarded([&] {
    *out = new pbf_scenario{pbf::load_scenario(path)};
    return PBF_OK;
  });
}

pbf_status pbf_scenario_set(pbf_scenario* scenario, const char* key,
                            const char* value) {
  PBF_REQUIRE(scenario && key && value, "arguments must not be NULL");
  return guarded([&] {
    pbf::apply_override(scenario->config, key, value);
    return PBF_OK;
  });
}

pbf_status pbf_scenario_get(const pbf_scenario* scenario, const char* key,
                            char* buf, size_t cap, size_t* needed) {
  PBF_REQUIRE(scenario && key, "arguments must not be NULL");
  return guarded([&] {
    const auto snap = scenario->config.snapshot();
    auto it = snap.find(key);
    if (it == snap.end())
      throw pbf::ValidationError(key, 0, "unknown key");
    return copy_out(it->second, buf, cap, needed);
  });
}

pbf_status pbf_scenario_to_text(const pbf_scenario* scenario, char* buf,
                                size_t cap, size_t* needed) {
  PBF_REQUIRE(scenario, "scenario must not be NULL");
  return guarded([&] { return copy_out(scenario->config.to_text(), buf, cap, needed); });
}

void pbf_scenario_free(pbf_scenario* scenario) { delete scenario; }

pbf_status pbf_certify(const pbf_scenario* scenario, pbf_certificate_set** out) {
  PBF_REQUIRE(scenario && out, "arguments must not be NULL");
  return guarded([&] {
    *out = new pbf_certificate_set{pbf::certify(scenario->config)};
    return PBF_OK;
  });
}

size_t pbf_certificate_set_size(const pbf_certificate_set* set) {
  return set ? set->outcomes.size() : 0;
}

pbf_status pbf_certificate_set_get(const pbf_certificate_set* set, size_t index,
                                   pbf_certificate* out) {
  PBF_REQUIRE(set && out, "arguments must not be NULL");
  PBF_REQUIRE(index < set->outcomes.size(), "certificate index out of range");
  fill(set->outcomes[index], out);
  return PBF_OK;
}

pbf_status pbf_certificate_set_reference(const pbf_certificate_set* set,
                                         pbf_certificate* out) {
  PBF_REQUIRE(set && out, "arguments must not be NULL");
  const auto ref = pbf::reference_certificate(set->outcomes);
  if (!ref)
    return fail(PBF_ERR_CERTIFICATE_UNAVAILABLE, "no certificate could be established");
  fill(*ref, out);
  return PBF_OK;
}

pbf_status pbf_certificate_set_write_csv(const pbf_certificate_set* set,
                                         const char* path) {
  PBF_REQUIRE(set && path, "arguments must not be NULL");
  return guarded([&] {
    std::ostringstream os;
    pbf::write_certificate_csv(os, set->outcomes);
    pbf::write_file_atomic(path, os.str());
    return PBF_OK;
  });
}

pbf_status pbf_certificate_set_read_csv(const char* path, pbf_certificate_set** out) {
  PBF_REQUIRE(path && out, "arguments must not be NULL");
  return guarded([&] {
    std::ifstream in(path);
    if (!in) throw pbf::IoError(std::string("cannot read '") + path + "'");
    *out = new pbf_certificate_set{pbf::read_certificate_csv(in)};
    return PBF_OK;
  });
}

pbf_status pbf_certificate_set_to_text(const pbf_certificate_set* set, char* buf,
                                       size_t cap, size_t* needed) {
  PBF_REQUIRE(set, "set must not be NULL");
  return guarded([&] {
    std::ostringstream os;
    pbf::write_certificate_text(os, set->outcomes);
    return copy_out(os.str(), buf, cap, needed);
  });
}

void pbf_certificate_set_free(pbf_certificate_set* set) { delete set; }

pbf_status pbf_solve_hstar_rcbf(double alpha_c, double q1, double q2,
                                double p_hat, double p, pbf_certificate* out) {
  PBF_REQUIRE(out, "out must not be NULL");
  return guarded([&] {
    const auto b = pbf::QuadraticBarrier::from_weights(q1, q2);
    fill(pbf::solve_hstar_rcbf(pbf::LinearClassKe(alpha_c),
                               pbf::delta_bounds_quadratic(b), p_hat, p),
         out);
    return PBF_OK;
  });
}

pbf_status pbf_solve_hstar_issf(double alpha_c, double eps0, double lambda,
                                double p, pbf_certificate* out) {
  PBF_REQUIRE(out, "out must not be NULL");
  return guarded([&] {
    fill(pbf::solve_hstar_issf(pbf::LinearClassKe(alpha_c), eps0, lambda, p), out);
    return PBF_OK;
  });
}

pbf_status pbf_solve_hstar_issf_pbf(double alpha_c, double q1, double q2,
                                    double eps0, double lambda, double p,
                                    pbf_certificate* out) {
  PBF_REQUIRE(out, "out must not be NULL");
  return guarded([&] {
    const auto b = pbf::QuadraticBarrier::from_weights(q1, q2);
    fill(pbf::solve_hstar_issf_pbf(pbf::LinearClassKe(alpha_c),
                                   pbf::delta_bounds_quadratic(b), eps0, lambda, p),
         out);
    return PBF_OK;
  });
}

pbf_status pbf_safety_filter(const pbf_scenario* scenario, double t,
                             const double x[2], double u_des,
                             pbf_filter_result* out) {
  PBF_REQUIRE(scenario && x && out, "arguments must not be NULL");
  return guarded([&] {
    const auto& cfg = scenario->config;
    const pbf::StepDisturbance dist(cfg.plant.F_bar, cfg.step_times);
    const auto sys = pbf::pendulum_system(cfg.plant, dist);
    const auto barrier = pbf::QuadraticBarrier::from_weights(cfg.q1, cfg.q2);
    pbf::Vector state(2), u(1);
    state << x[0], x[1];
    u << u_des;
    const auto r = pbf::safety_filter(sys, barrier, pbf::LinearClassKe(cfg.alpha_c),
                                      cfg.compensation_term(), t, state, u);
    *out = pbf_filter_result{r.feasible ? r.u(0) : 0.0, r.active, r.feasible, r.slack};
    if (!r.feasible)
      return fail(PBF_ERR_INFEASIBLE, "no input satisfies the safety constraint");
    return PBF_OK;
  });
}

pbf_status pbf_simulate(const pbf_scenario* scenario, pbf_trajectory** out) {
  PBF_REQUIRE(scenario && out, "arguments must not be NULL");
  *out = nullptr;
  return guarded([&] {
    const auto& cfg = scenario->config;
    try {
      auto traj = pbf::simulate(cfg.simulation_setup());
      traj.metadata = cfg.snapshot();
      *out = new pbf_trajectory{std::move(traj)};
      return PBF_OK;
    } catch (const pbf::InfeasibleError& e) {
      *out = new pbf_trajectory{e.partial()};
      (*out)->traj.metadata = cfg.snapshot();
      throw;
    } catch (const pbf::IntegrationError& e) {
      *out = new pbf_trajectory{e.partial()};
      (*out)->traj.metadata = cfg.snapshot();
      throw;
    }
  });
}

size_t pbf_trajectory_size(const pbf_trajectory* traj) {
  return traj ? traj->traj.samples.size() : 0;
}

pbf_status pbf_trajectory_sample(const pbf_trajectory* traj, size_t index,
                                 pbf_sample* out) {
  PBF_REQUIRE(traj && out, "arguments must not be NULL");
  PBF_REQUIRE(index < traj->traj.samples.size(), "sample index out of range");
  const auto& s = traj->traj.samples[index];
  *out = pbf_sample{s.t, s.x(0), s.x(1), s.u, s.F, s.h, s.sigma, s.constraint_residual};
  return PBF_OK;
}

pbf_status pbf_trajectory_monitor(const pbf_trajectory* traj, double h_star,
                                  double tol, pbf_monitor_result* out) {
  PBF_REQUIRE(traj && out, "arguments must not be NULL");
  return guarded([&] {
    const auto m = pbf::monitor(traj->traj, h_star, tol);
    *out = pbf_monitor_result{m.min_h, m.min_h_time, m.h_star_ref, m.violated};
    return PBF_OK;
  });
}

pbf_status pbf_trajectory_write_csv(const pbf_trajectory* traj, const char* path) {
  PBF_REQUIRE(traj && path, "arguments must not be NULL");
  return guarded([&] {
    std::ostringstream os;
    pbf::write_trajectory_csv(os, traj->traj);
    pbf::write_file_atomic(path, os.str());
    return PBF_OK;
  });
}

void pbf_trajectory_free(pbf_trajectory* traj) { delete traj; }

pbf_status pbf_sweep(const pbf_scenario* scenario, const char* param,
                     const double* values, size_t count, const char* out_dir,
                     const char* aggregate_path) {
  PBF_REQUIRE(scenario && param, "arguments must not be NULL");
  PBF_REQUIRE(values || count == 0, "values must not be NULL");
  return guarded([&] {
    const auto which = pbf::sweep_parameter_from_string(param);
    const std::vector<double> v(values, values + count);
    const auto rows = pbf::run_sweep(scenario->config, which, v, out_dir ? out_dir : "");
    if (aggregate_path) {
      std::ostringstream os;
      pbf::write_sweep_csv(os, which, rows);
      pbf::write_file_atomic(aggregate_path, os.str());
    }
    return PBF_OK;
  });
}

pbf_status pbf_verify(pbf_criterion_callback callback, void* user, int* all_passed) {
  return guarded([&] {
    bool ok = true;
    pbf::run_acceptance([&](const pbf::CriterionResult& r) {
      ok = ok && r.passed;
      if (callback) {
        const pbf_criterion c{r.id, r.name.c_str(), r.passed, r.detail.c_str()};
        callback(&c, user);
      }
    });
    if (all_passed) *all_passed = ok;
    return PBF_OK;
  });
}

}  // extern "C"
