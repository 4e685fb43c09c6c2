#include "xwacoda/error.hpp"

namespace xwacoda {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedXml: return "MALFORMED_XML";
    case ErrorCode::SchemaViolation: return "SCHEMA_VIOLATION";
    case ErrorCode::NotAttributeNode: return "NOT_ATTRIBUTE_NODE";
    case ErrorCode::UnknownMeasureId: return "UNKNOWN_MEASURE_ID";
    case ErrorCode::UnknownDimensionId: return "UNKNOWN_DIMENSION_ID";
    case ErrorCode::DuplicateMeasureInFact: return "DUPLICATE_MEASURE_IN_FACT";
    case ErrorCode::MissingDimensionRef: return "MISSING_DIMENSION_REF";
    case ErrorCode::TypeError: return "TYPE_ERROR";
    case ErrorCode::UnknownLevelId: return "UNKNOWN_LEVEL_ID";
    case ErrorCode::DuplicateMemberId: return "DUPLICATE_MEMBER_ID";
    case ErrorCode::UnknownAttributeId: return "UNKNOWN_ATTRIBUTE_ID";
    case ErrorCode::FileNotFound: return "FILE_NOT_FOUND";
    case ErrorCode::IoError: return "IO_ERROR";
    case ErrorCode::IntegrityError: return "INTEGRITY_ERROR";
    case ErrorCode::MappingError: return "MAPPING_ERROR";
    case ErrorCode::SyntaxError: return "SYNTAX_ERROR";
    case ErrorCode::ValidationError: return "VALIDATION_ERROR";
    case ErrorCode::NonStrictHierarchy: return "NON_STRICT_HIERARCHY";
    case ErrorCode::AlreadyCoarsest: return "ALREADY_COARSEST";
    case ErrorCode::AlreadyFinest: return "ALREADY_FINEST";
    case ErrorCode::UnknownAxisMember: return "UNKNOWN_AXIS_MEMBER";
  }
  return "UNKNOWN";
}

std::string to_string(const Diagnostic& d) {
  std::string out = d.code + " " + d.path;
  if (!d.message.empty()) out += ": " + d.message;
  return out;
}

SyntaxError::SyntaxError(std::size_t position, const std::string& message)
    : Error(ErrorCode::SyntaxError,
            "syntax error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

namespace {

std::string summarize(const std::vector<Diagnostic>& report) {
  std::string out = "integrity check failed with " + std::to_string(report.size()) +
                    " diagnostic(s)";
  for (const auto& d : report) out += "\n  " + to_string(d);
  return out;
}

}  // namespace

IntegrityError::IntegrityError(std::vector<Diagnostic> report)
    : Error(ErrorCode::IntegrityError, summarize(report)), report_(std::move(report)) {}

}  // namespace xwacoda
