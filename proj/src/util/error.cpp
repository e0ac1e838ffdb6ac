#include "loadshift/util/error.hpp"

namespace loadshift {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNamedColumn: return "named-column error";
    case ErrorCode::kInsufficientData: return "insufficient-data error";
    case ErrorCode::kNoAlignment: return "no-alignment error";
    case ErrorCode::kDegenerate: return "degenerate error";
    case ErrorCode::kSchema: return "schema error";
    case ErrorCode::kEmptyInput: return "empty-input error";
    case ErrorCode::kMixedField: return "mixed-field error";
    case ErrorCode::kMapping: return "mapping error";
    case ErrorCode::kZeroPanel: return "zero-panel error";
    case ErrorCode::kInsufficientWeather: return "insufficient-weather error";
    case ErrorCode::kCoverage: return "coverage error";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kFeature: return "feature error";
    case ErrorCode::kPrecondition: return "precondition error";
    case ErrorCode::kParameter: return "parameter error";
    case ErrorCode::kCollinearity: return "collinearity error";
    case ErrorCode::kFactorization: return "factorization error";
    case ErrorCode::kDivergence: return "divergence error";
    case ErrorCode::kNoModel: return "no-model error";
    case ErrorCode::kMetadata: return "metadata error";
    case ErrorCode::kSize: return "size error";
    case ErrorCode::kIo: return "io error";
    case ErrorCode::kConfig: return "config error";
  }
  return "error";
}

}  // namespace loadshift
