#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace electroar {

// Error taxonomy shared by every module. The C API maps these one-to-one
// onto ear_status codes, so the order here is part of the ABI.
enum class ErrorCode {
  InvalidArgument = 1,
  DegenerateGrid,
  GeometryMismatch,
  DomainError,
  InsufficientData,
  NonPositiveMagnitude,
  DegenerateFit,
  ValueOverflow,
  GeometryOverflow,
  BadMagic,
  UnsupportedVersion,
  TruncatedFrame,
  ChecksumMismatch,
  InvalidField,
  BadHeader,
  VersionMismatch,
  CorruptFrame,
  UndefinedNormalization,
  EmptyTemplates,
  SeriesTooShort,
  LabelMismatch,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace electroar
