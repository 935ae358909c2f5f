#include "bplab/errors.hpp"

namespace bplab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonpositiveDepth: return "NonpositiveDepth";
    case ErrorCode::DryState: return "DryState";
    case ErrorCode::LogDomain: return "LogDomain";
    case ErrorCode::SolverDivergence: return "SolverDivergence";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::NoShock: return "NoShock";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace bplab
