#include "electroar/error.hpp"

namespace electroar {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateGrid: return "DegenerateGrid";
    case ErrorCode::GeometryMismatch: return "GeometryMismatch";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NonPositiveMagnitude: return "NonPositiveMagnitude";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::ValueOverflow: return "ValueOverflow";
    case ErrorCode::GeometryOverflow: return "GeometryOverflow";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedFrame: return "TruncatedFrame";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptFrame: return "CorruptFrame";
    case ErrorCode::UndefinedNormalization: return "UndefinedNormalization";
    case ErrorCode::EmptyTemplates: return "EmptyTemplates";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace electroar
