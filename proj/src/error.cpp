#include "srcalloc/error.hpp"

namespace srcalloc {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInput: return "input error";
    case ErrorCode::kAlignment: return "alignment error";
    case ErrorCode::kInsufficientData: return "insufficient data";
    case ErrorCode::kDegenerateWeights: return "degenerate weights";
    case ErrorCode::kDegenerateVariance: return "degenerate variance";
    case ErrorCode::kEmptyPool: return "empty pool";
    case ErrorCode::kCoverage: return "coverage error";
    case ErrorCode::kScale: return "scale error";
    case ErrorCode::kAvailabilityMismatch: return "availability mismatch";
    case ErrorCode::kIndex: return "index error";
    case ErrorCode::kIo: return "I/O error";
  }
  return "error";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInput:
    case ErrorCode::kAlignment:
    case ErrorCode::kInsufficientData:
    case ErrorCode::kIndex:
    case ErrorCode::kCoverage:
      return 1;
    case ErrorCode::kDegenerateWeights:
    case ErrorCode::kDegenerateVariance:
    case ErrorCode::kEmptyPool:
    case ErrorCode::kScale:
    case ErrorCode::kAvailabilityMismatch:
      return 2;
    case ErrorCode::kIo:
      return 3;
  }
  return 1;
}

}  // namespace srcalloc
