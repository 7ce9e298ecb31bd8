#include "pbf/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "pbf/error.hpp"

namespace pbf {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  if (ec != std::errc()) throw InvalidArgument("cannot format value");
  return std::string(buf.data(), ptr);
}

namespace {

constexpr const char* kTrajectoryHeader = "t,x1,x2,u,F,h,sigma,constraint_residual";
constexpr const char* kCertificateHeader =
    "equation,h_star,residual,conditions_ok,regular,status,annotation";

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

double parse_field(const std::string& s, int line) {
  if (s == "nan") return std::nan("");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw IoError("line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, int line) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw IoError("line " + std::to_string(line) + ": expected true/false, got '" + s + "'");
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << kTrajectoryHeader << '\n';
  for (const auto& s : traj.samples) {
    os << format_double(s.t) << ',' << format_double(s.x(0)) << ','
       << format_double(s.x(1)) << ',' << format_double(s.u) << ','
       << format_double(s.F) << ',' << format_double(s.h) << ','
       << format_double(s.sigma) << ',' << format_double(s.constraint_residual)
       << '\n';
  }
}

std::vector<TrajectorySample> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTrajectoryHeader)
    throw IoError("trajectory CSV: missing or unexpected header");
  std::vector<TrajectorySample> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8)
      throw IoError("line " + std::to_string(line_no) + ": expected 8 columns");
    std::array<double, 8> v{};
    for (std::size_t i = 0; i < 8; ++i) v[i] = parse_field(f[i], line_no);
    out.push_back({v[0], Eigen::Vector2d(v[1], v[2]), v[3], v[4], v[5], v[6], v[7]});
  }
  return out;
}

void write_certificate_csv(std::ostream& os,
                           const std::vector<CertificateOutcome>& outcomes) {
  os << kCertificateHeader << '\n';
  for (const auto& o : outcomes) {
    os << to_string(o.equation) << ',';
    if (o.certificate) {
      const auto& c = *o.certificate;
      os << format_double(c.h_star) << ',' << format_double(c.residual) << ','
         << yes_no(c.conditions_ok) << ',' << yes_no(c.regular) << ",ok,"
         << quote(c.annotation) << '\n';
    } else {
      os << ",,false,false,unavailable," << quote(o.error) << '\n';
    }
  }
}

std::vector<CertificateOutcome> read_certificate_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCertificateHeader)
    throw IoError("certificate CSV: missing or unexpected header");
  std::vector<CertificateOutcome> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7)
      throw IoError("line " + std::to_string(line_no) + ": expected 7 columns");
    CertificateOutcome o{equation_from_string(f[0]), std::nullopt, {}};
    if (f[5] == "ok") {
      LevelSetCertificate c;
      c.equation = o.equation;
      c.h_star = parse_field(f[1], line_no);
      c.residual = parse_field(f[2], line_no);
      c.conditions_ok = parse_bool(f[3], line_no);
      c.regular = parse_bool(f[4], line_no);
      c.annotation = f[6];
      o.certificate = std::move(c);
    } else if (f[5] == "unavailable") {
      o.error = f[6];
    } else {
      throw IoError("line " + std::to_string(line_no) + ": unknown status '" + f[5] + "'");
    }
    out.push_back(std::move(o));
  }
  return out;
}

void write_certificate_text(std::ostream& os,
                            const std::vector<CertificateOutcome>& outcomes) {
  for (const auto& o : outcomes) {
    os << std::left << std::setw(11) << to_string(o.equation);
    if (!o.certificate) {
      os << "unavailable: " << o.error << '\n';
      continue;
    }
    const auto& c = *o.certificate;
    os << "h* = " << format_double(c.h_star)
       << "  residual = " << format_double(c.residual)
       << "  conditions_ok = " << yes_no(c.conditions_ok)
       << "  regular = " << yes_no(c.regular) << "  (" << c.annotation << ")\n";
  }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ostringstream tmp_name;
  tmp_name << path << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
  const fs::path tmp(tmp_name.str());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

}  // namespace pbf
