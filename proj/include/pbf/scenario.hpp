#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbf/levelset.hpp"
#include "pbf/sim.hpp"

namespace pbf {

enum class CompensationKind { None, RobustBound, Issf };

/// Flat key/value scenario description. Keys use dotted section prefixes,
/// e.g. `plant.mass = 2`. Omitted keys take the pendulum benchmark defaults.
struct ScenarioConfig {
  std::string name = "pendulum";
  PendulumParams plant;
  std::vector<double> step_times{5.0, 10.0, 15.0};
  double q1 = 4.0;
  double q2 = 2.0;
  double alpha_c = 8.0;
  CompensationKind compensation = CompensationKind::RobustBound;
  double p_hat = 1.0;
  double eps0 = 1.0;
  double lambda = 0.0;
  Eigen::Vector2d x0 = Eigen::Vector2d::Zero();
  double dt = 1e-3;
  double horizon = 20.0;
  std::string out_dir = "out";

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  double uncertainty_bound() const { return plant.uncertainty_bound(); }
  CompensationTerm compensation_term() const;
  SimulationSetup simulation_setup() const;

  /// Canonical text form; parse_scenario(to_text()) reproduces the config.
  std::string to_text() const;
  std::map<std::string, std::string> snapshot() const;
};

/// Keys understood by the parser, in canonical order.
const std::vector<std::string>& scenario_keys();

std::string_view to_string(CompensationKind kind);

/// Parses and validates scenario text. Comments start with '#'. Unknown keys,
/// malformed numbers and out-of-range values raise ValidationError carrying
/// the field and line number.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

/// Applies one key/value assignment (same syntax as the file) and revalidates.
void apply_override(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value);

/// A certificate or the reason it could not be produced.
struct CertificateOutcome {
  CertificateEquation equation;
  std::optional<LevelSetCertificate> certificate;
  std::string error;
};

/// All certificates applicable to the scenario's compensation term. An
/// unavailable certificate is reported without aborting the others.
std::vector<CertificateOutcome> certify(const ScenarioConfig& cfg);

/// The certificate a closed-loop run should be monitored against: the
/// tightest available one, or nullopt if none could be produced.
std::optional<LevelSetCertificate> reference_certificate(
    const std::vector<CertificateOutcome>& outcomes);

}  // namespace pbf
