#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xwacoda {

enum class ErrorCode {
  MalformedXml,
  SchemaViolation,
  NotAttributeNode,
  UnknownMeasureId,
  UnknownDimensionId,
  DuplicateMeasureInFact,
  MissingDimensionRef,
  TypeError,
  UnknownLevelId,
  DuplicateMemberId,
  UnknownAttributeId,
  FileNotFound,
  IoError,
  IntegrityError,
  MappingError,
  SyntaxError,
  ValidationError,
  NonStrictHierarchy,
  AlreadyCoarsest,
  AlreadyFinest,
  UnknownAxisMember,
};

/// Stable upper-snake name of an error code, used in CLI and HTTP output.
std::string_view error_code_name(ErrorCode code);

/// A diagnostic carries a stable code (e.g. DANGLING_FACT_REF) and the path of
/// the offending element, e.g. "Suspicious_region/f1/Patient".
struct Diagnostic {
  std::string code;
  std::string path;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string to_string(const Diagnostic& d);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message);

  /// Zero-based byte offset into the query text.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(std::vector<Diagnostic> report);

  const std::vector<Diagnostic>& report() const noexcept { return report_; }

 private:
  std::vector<Diagnostic> report_;
};

}  // namespace xwacoda
