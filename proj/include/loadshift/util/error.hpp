#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace loadshift {

enum class ErrorCode {
  kNamedColumn,
  kInsufficientData,
  kNoAlignment,
  kDegenerate,
  kSchema,
  kEmptyInput,
  kMixedField,
  kMapping,
  kZeroPanel,
  kInsufficientWeather,
  kCoverage,
  kDomain,
  kFeature,
  kPrecondition,
  kParameter,
  kCollinearity,
  kFactorization,
  kDivergence,
  kNoModel,
  kMetadata,
  kSize,
  kIo,
  kConfig,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Every failure path throws this with a code that
/// callers (and the CLI exit-code mapping) can switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace loadshift
