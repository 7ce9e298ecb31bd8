#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pbf/scenario.hpp"

namespace pbf {

enum class SweepParameter { PHat, Eps0, Lambda, FBar };

SweepParameter sweep_parameter_from_string(const std::string& name);
std::string_view to_string(SweepParameter p);

struct SweepRow {
  double value;
  std::optional<double> h_star_rcbf;
  std::optional<double> h_star_issf;
  std::optional<double> h_star_issf_pbf;
  /// Reference level the run was monitored against (NaN if none).
  double h_star_ref;
  double min_h;
  bool violated;
  /// "ok", or the error that aborted the run.
  std::string status;
};

/// Runs one closed-loop simulation per value, in parallel. When `out_dir` is
/// non-empty each entry's trajectory is written atomically to
/// `<out_dir>/sweep_<param>_<index>.csv`. Rows come back in input order.
std::vector<SweepRow> run_sweep(const ScenarioConfig& base, SweepParameter param,
                                const std::vector<double>& values,
                                const std::string& out_dir = {});

/// Columns: <param>,h_star_rcbf,h_star_issf,h_star_issf_pbf,h_star_ref,min_h,
/// violated,status.
void write_sweep_csv(std::ostream& os, SweepParameter param,
                     const std::vector<SweepRow>& rows);

}  // namespace pbf
