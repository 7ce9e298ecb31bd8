#include "pbf/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pbf/error.hpp"
#include "pbf/report.hpp"

namespace pbf {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last)
    throw ValidationError(key, 0, "expected a number, got '" + t + "'");
  if (!std::isfinite(v)) throw ValidationError(key, 0, "value must be finite");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

CompensationKind parse_kind(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "none") return CompensationKind::None;
  if (t == "robust_bound") return CompensationKind::RobustBound;
  if (t == "issf") return CompensationKind::Issf;
  throw ValidationError(key, 0,
                        "expected one of none, robust_bound, issf; got '" + t + "'");
}

void assign(ScenarioConfig& c, const std::string& key, const std::string& value) {
  auto num = [&] { return parse_number(key, value); };
  if (key == "scenario.name") c.name = trim(value);
  else if (key == "plant.grav") c.plant.grav = num();
  else if (key == "plant.mass") c.plant.mass = num();
  else if (key == "plant.length") c.plant.length = num();
  else if (key == "plant.kp") c.plant.Kp = num();
  else if (key == "plant.kd") c.plant.Kd = num();
  else if (key == "disturbance.f_bar") c.plant.F_bar = num();
  else if (key == "disturbance.step_times") c.step_times = parse_list(key, value);
  else if (key == "barrier.q1") c.q1 = num();
  else if (key == "barrier.q2") c.q2 = num();
  else if (key == "class_k.alpha_c") c.alpha_c = num();
  else if (key == "compensation.variant") c.compensation = parse_kind(key, value);
  else if (key == "compensation.p_hat") c.p_hat = num();
  else if (key == "compensation.eps0") c.eps0 = num();
  else if (key == "compensation.lambda") c.lambda = num();
  else if (key == "sim.x0") {
    const auto v = parse_list(key, value);
    if (v.size() != 2) throw ValidationError(key, 0, "expected two comma-separated numbers");
    c.x0 = Eigen::Vector2d(v[0], v[1]);
  } else if (key == "sim.dt") c.dt = num();
  else if (key == "sim.horizon") c.horizon = num();
  else if (key == "outputs.dir") c.out_dir = trim(value);
  else throw ValidationError(key, 0, "unknown key");
}

}  // namespace

const std::vector<std::string>& scenario_keys() {
  static const std::vector<std::string> keys{
      "scenario.name",        "plant.grav",          "plant.mass",
      "plant.length",         "plant.kp",            "plant.kd",
      "disturbance.f_bar",    "disturbance.step_times", "barrier.q1",
      "barrier.q2",           "class_k.alpha_c",     "compensation.variant",
      "compensation.p_hat",   "compensation.eps0",   "compensation.lambda",
      "sim.x0",               "sim.dt",              "sim.horizon",
      "outputs.dir"};
  return keys;
}

std::string_view to_string(CompensationKind kind) {
  switch (kind) {
    case CompensationKind::None: return "none";
    case CompensationKind::RobustBound: return "robust_bound";
    case CompensationKind::Issf: return "issf";
  }
  return "unknown";
}

void ScenarioConfig::validate() const {
  auto positive = [](const char* key, double v, const char* rule) {
    if (!(v > 0.0)) throw ValidationError(key, 0, std::string("must satisfy ") + rule);
  };
  auto nonnegative = [](const char* key, double v, const char* rule) {
    if (!(v >= 0.0)) throw ValidationError(key, 0, std::string("must satisfy ") + rule);
  };
  positive("plant.mass", plant.mass, "m > 0");
  positive("plant.length", plant.length, "l > 0");
  nonnegative("disturbance.f_bar", plant.F_bar, "F_bar >= 0");
  positive("barrier.q1", q1, "q1 > 0");
  positive("barrier.q2", q2, "q2 > 0");
  positive("class_k.alpha_c", alpha_c, "alpha_c > 0");
  nonnegative("compensation.p_hat", p_hat, "p_hat >= 0");
  positive("compensation.eps0", eps0, "eps > 0");
  nonnegative("compensation.lambda", lambda, "d eps/dr >= 0 (lambda >= 0)");
  positive("sim.dt", dt, "dt > 0");
  positive("sim.horizon", horizon, "horizon > 0");
  if (step_times.size() > 3)
    throw ValidationError("disturbance.step_times", 0, "at most three step times");
  for (std::size_t i = 0; i < step_times.size(); ++i) {
    if (step_times[i] < 0.0)
      throw ValidationError("disturbance.step_times", 0, "step times must be >= 0");
    if (i && step_times[i] < step_times[i - 1])
      throw ValidationError("disturbance.step_times", 0, "step times must be ordered");
  }
  if (name.empty() || name.find_first_of(",\"\n") != std::string::npos)
    throw ValidationError("scenario.name", 0, "must be non-empty without commas or quotes");
  if (out_dir.empty()) throw ValidationError("outputs.dir", 0, "must be non-empty");
}

CompensationTerm ScenarioConfig::compensation_term() const {
  switch (compensation) {
    case CompensationKind::None: return CompensationTerm::none();
    case CompensationKind::RobustBound: return CompensationTerm::robust_bound(p_hat);
    case CompensationKind::Issf: return CompensationTerm::issf(eps0, lambda);
  }
  throw InvalidArgument("unknown compensation kind");
}

SimulationSetup ScenarioConfig::simulation_setup() const {
  SimulationSetup s;
  s.plant = plant;
  s.step_times = step_times;
  s.q1 = q1;
  s.q2 = q2;
  s.alpha_c = alpha_c;
  s.compensation = compensation_term();
  s.x0 = x0;
  s.dt = dt;
  s.horizon = horizon;
  s.name = name;
  return s;
}

std::map<std::string, std::string> ScenarioConfig::snapshot() const {
  return {
      {"scenario.name", name},
      {"plant.grav", format_double(plant.grav)},
      {"plant.mass", format_double(plant.mass)},
      {"plant.length", format_double(plant.length)},
      {"plant.kp", format_double(plant.Kp)},
      {"plant.kd", format_double(plant.Kd)},
      {"disturbance.f_bar", format_double(plant.F_bar)},
      {"disturbance.step_times", join(step_times)},
      {"barrier.q1", format_double(q1)},
      {"barrier.q2", format_double(q2)},
      {"class_k.alpha_c", format_double(alpha_c)},
      {"compensation.variant", std::string(to_string(compensation))},
      {"compensation.p_hat", format_double(p_hat)},
      {"compensation.eps0", format_double(eps0)},
      {"compensation.lambda", format_double(lambda)},
      {"sim.x0", join({x0(0), x0(1)})},
      {"sim.dt", format_double(dt)},
      {"sim.horizon", format_double(horizon)},
      {"outputs.dir", out_dir},
  };
}

std::string ScenarioConfig::to_text() const {
  const auto snap = snapshot();
  std::string out;
  for (const auto& key : scenario_keys()) out += key + " = " + snap.at(key) + "\n";
  return out;
}

ScenarioConfig parse_scenario(const std::string& text) {
  ScenarioConfig cfg;
  std::map<std::string, int> lines;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("", line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (lines.count(key)) throw ValidationError(key, line_no, "duplicate key");
    lines[key] = line_no;
    try {
      assign(cfg, key, value);
    } catch (const ValidationError& e) {
      throw ValidationError(key, line_no, e.detail());
    }
  }
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    auto it = lines.find(e.field());
    if (it == lines.end()) throw;
    throw ValidationError(e.field(), it->second, e.detail());
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void apply_override(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value) {
  ScenarioConfig next = cfg;
  assign(next, key, value);
  next.validate();
  cfg = std::move(next);
}

std::vector<CertificateOutcome> certify(const ScenarioConfig& cfg) {
  cfg.validate();
  const LinearClassKe alpha(cfg.alpha_c);
  const QuadraticBarrier barrier = QuadraticBarrier::from_weights(cfg.q1, cfg.q2);
  const GradientNormBounds d = delta_bounds_quadratic(barrier);
  const double p = cfg.uncertainty_bound();
  std::vector<CertificateOutcome> out;

  auto attempt = [&](CertificateEquation eq, auto&& solve) {
    CertificateOutcome o{eq, std::nullopt, {}};
    try {
      o.certificate = solve();
      o.equation = o.certificate->equation;
    } catch (const CertificateUnavailable& e) {
      o.error = e.what();
    }
    out.push_back(std::move(o));
  };

  if (cfg.compensation == CompensationKind::Issf) {
    attempt(CertificateEquation::Issf,
            [&] { return solve_hstar_issf(alpha, cfg.eps0, cfg.lambda, p); });
    attempt(CertificateEquation::IssfPbf, [&] {
      return solve_hstar_issf_pbf(alpha, d, cfg.eps0, cfg.lambda, p);
    });
    if (out[0].certificate && out[1].certificate)
      compare_certificates(*out[0].certificate, *out[1].certificate);
  } else {
    const bool none = cfg.compensation == CompensationKind::None;
    const double p_hat = none ? 0.0 : cfg.p_hat;
    const auto eq = p_hat < p ? CertificateEquation::RcbfUnder
                              : CertificateEquation::RcbfOver;
    attempt(eq, [&] {
      auto c = solve_hstar_rcbf(alpha, d, p_hat, p);
      if (none) c.annotation = "no compensation (p_hat = 0); " + c.annotation;
      return c;
    });
  }
  return out;
}

std::optional<LevelSetCertificate> reference_certificate(
    const std::vector<CertificateOutcome>& outcomes) {
  std::optional<LevelSetCertificate> best;
  for (const auto& o : outcomes) {
    if (!o.certificate || !o.certificate->conditions_ok) continue;
    if (!best || o.certificate->h_star > best->h_star) best = o.certificate;
  }
  return best;
}

}  // namespace pbf
