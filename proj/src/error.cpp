#include "lincbwk/error.hpp"

namespace lincbwk {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDimension: return "invalid-dimension";
    case ErrorCode::kInvalidConfidence: return "invalid-confidence";
    case ErrorCode::kContextOutOfRange: return "context-out-of-range";
    case ErrorCode::kEmptySlate: return "empty-slate";
    case ErrorCode::kEmptyHistory: return "empty-history";
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidBudget: return "invalid-budget";
    case ErrorCode::kInvalidMeans: return "invalid-means";
    case ErrorCode::kInvalidOptions: return "invalid-options";
    case ErrorCode::kLpNumerics: return "lp-numerics";
    case ErrorCode::kConfigInvalid: return "config-invalid";
    case ErrorCode::kIoError: return "io-error";
    case ErrorCode::kUnknownBaseline: return "unknown-baseline";
  }
  return "unknown-error";
}

}  // namespace lincbwk
