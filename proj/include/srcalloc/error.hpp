#pragma once

#include <stdexcept>
#include <string>

namespace srcalloc {

enum class ErrorCode {
  kInput,
  kAlignment,
  kInsufficientData,
  kDegenerateWeights,
  kDegenerateVariance,
  kEmptyPool,
  kCoverage,
  kScale,
  kAvailabilityMismatch,
  kIndex,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code) noexcept;

// Process exit status for the command-line tool: 1 input, 2 constraint or
// degenerate data, 3 I/O.
int exit_code_for(ErrorCode code) noexcept;

}  // namespace srcalloc
