#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pbf/scenario.hpp"
#include "pbf/sim.hpp"

namespace pbf {

/// 17 significant digits, so the text round-trips to the same double.
std::string format_double(double v);

/// Columns: t,x1,x2,u,F,h,sigma,constraint_residual.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
std::vector<TrajectorySample> read_trajectory_csv(std::istream& is);

/// Columns: equation,h_star,residual,conditions_ok,regular,status,annotation.
void write_certificate_csv(std::ostream& os,
                           const std::vector<CertificateOutcome>& outcomes);
std::vector<CertificateOutcome> read_certificate_csv(std::istream& is);

void write_certificate_text(std::ostream& os,
                            const std::vector<CertificateOutcome>& outcomes);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace pbf
