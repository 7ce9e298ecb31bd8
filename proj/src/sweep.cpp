#include "pbf/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "pbf/error.hpp"
#include "pbf/report.hpp"

namespace pbf {

SweepParameter sweep_parameter_from_string(const std::string& name) {
  if (name == "p_hat") return SweepParameter::PHat;
  if (name == "eps0") return SweepParameter::Eps0;
  if (name == "lambda") return SweepParameter::Lambda;
  if (name == "F_bar" || name == "f_bar") return SweepParameter::FBar;
  throw ValidationError("--param", 0,
                        "expected one of p_hat, eps0, lambda, F_bar; got '" + name + "'");
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::PHat: return "p_hat";
    case SweepParameter::Eps0: return "eps0";
    case SweepParameter::Lambda: return "lambda";
    case SweepParameter::FBar: return "F_bar";
  }
  return "unknown";
}

namespace {

const char* config_key(SweepParameter p) {
  switch (p) {
    case SweepParameter::PHat: return "compensation.p_hat";
    case SweepParameter::Eps0: return "compensation.eps0";
    case SweepParameter::Lambda: return "compensation.lambda";
    case SweepParameter::FBar: return "disturbance.f_bar";
  }
  return "";
}

SweepRow run_entry(const ScenarioConfig& cfg, double value,
                   const std::string& trajectory_path) {
  constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
  SweepRow row{value, std::nullopt, std::nullopt, std::nullopt, kNan, kNan, false, "ok"};
  const auto outcomes = certify(cfg);
  for (const auto& o : outcomes) {
    if (!o.certificate) continue;
    switch (o.equation) {
      case CertificateEquation::RcbfUnder:
      case CertificateEquation::RcbfOver: row.h_star_rcbf = o.certificate->h_star; break;
      case CertificateEquation::Issf: row.h_star_issf = o.certificate->h_star; break;
      case CertificateEquation::IssfPbf: row.h_star_issf_pbf = o.certificate->h_star; break;
    }
  }
  const auto ref = reference_certificate(outcomes);
  if (ref) row.h_star_ref = ref->h_star;

  Trajectory traj;
  try {
    traj = simulate(cfg.simulation_setup());
  } catch (const InfeasibleError& e) {
    traj = e.partial();
    row.status = e.what();
  } catch (const IntegrationError& e) {
    traj = e.partial();
    row.status = e.what();
  }
  traj.metadata = cfg.snapshot();
  if (!traj.samples.empty()) {
    row.min_h = traj.min_h();
    if (ref) row.violated = monitor(traj, *ref, 1e-4).violated;
  }
  if (!trajectory_path.empty()) {
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    write_file_atomic(trajectory_path, csv.str());
  }
  return row;
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, SweepParameter param,
                                const std::vector<double>& values,
                                const std::string& out_dir) {
  if (values.empty()) throw ValidationError("--values", 0, "sweep range is empty");
  std::vector<ScenarioConfig> configs;
  for (double v : values) {
    if (!std::isfinite(v))
      throw ValidationError("--values", 0, "sweep values must be finite");
    ScenarioConfig cfg = base;
    apply_override(cfg, config_key(param), format_double(v));
    configs.push_back(std::move(cfg));
  }

  std::vector<SweepRow> rows(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        std::string path;
        if (!out_dir.empty())
          path = out_dir + "/sweep_" + std::string(to_string(param)) + "_" +
                 std::to_string(i) + ".csv";
        rows[i] = run_entry(configs[i], values[i], path);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, values.size());
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

void write_sweep_csv(std::ostream& os, SweepParameter param,
                     const std::vector<SweepRow>& rows) {
  os << to_string(param)
     << ",h_star_rcbf,h_star_issf,h_star_issf_pbf,h_star_ref,min_h,violated,status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    os << format_double(r.value) << ',' << optional_field(r.h_star_rcbf) << ','
       << optional_field(r.h_star_issf) << ',' << optional_field(r.h_star_issf_pbf)
       << ',' << format_double(r.h_star_ref) << ',' << format_double(r.min_h) << ','
       << (r.violated ? "true" : "false") << ',' << status << '\n';
  }
}

}  // namespace pbf
