#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bplab {

enum class ErrorCode {
  InvalidArgument,
  GridMismatch,
  NonpositiveDepth,
  DryState,
  LogDomain,
  SolverDivergence,
  SizeLimit,
  NotSPD,
  InsufficientSamples,
  DegenerateFit,
  NoShock,
  CflViolation,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Non-fatal structured diagnostic (e.g. approaching a degenerate regime).
struct Warning {
  std::string code;
  std::string message;
  double value = 0.0;
};

using WarningLog = std::vector<Warning>;

}  // namespace bplab
