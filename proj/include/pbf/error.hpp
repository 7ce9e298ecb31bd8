#pragma once

#include <stdexcept>
#include <string>

namespace pbf {

enum class ErrorCode {
  InvalidArgument,
  Validation,
  Infeasible,
  Integration,
  CertificateUnavailable,
  InvariantFailure,
  Io,
};

/// Base class for every error raised by the library. The code maps one to one
/// onto the status values of the C API.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCode::InvalidArgument, what) {}
};

/// Scenario configuration rejected. `field` names the offending key and `line`
/// is its 1-based line in the source text (0 when not tied to a line).
class ValidationError : public Error {
 public:
  ValidationError(std::string field, int line, const std::string& what)
      : Error(ErrorCode::Validation, format(field, line, what)),
        field_(std::move(field)),
        detail_(what),
        line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }
  /// Message without the line/field prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(const std::string& field, int line,
                            const std::string& what) {
    std::string msg;
    if (line > 0) msg += "line " + std::to_string(line) + ": ";
    if (!field.empty()) msg += field + ": ";
    return msg + what;
  }

  std::string field_;
  std::string detail_;
  int line_;
};

class CertificateUnavailable : public Error {
 public:
  explicit CertificateUnavailable(const std::string& what)
      : Error(ErrorCode::CertificateUnavailable, what) {}
};

class InvariantFailure : public Error {
 public:
  explicit InvariantFailure(const std::string& what)
      : Error(ErrorCode::InvariantFailure, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace pbf
