#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace poseonly {

enum class ErrorCode {
  NonPositiveDepth,
  DegeneratePair,
  AllPairsDegenerate,
  InsufficientParallax,
  RankDeficient,
  DegenerateBase,
  DivergedNumerically,
  NegativeDepth,
  Degenerate,
  Disconnected,
  ConfigInvalid,
  GeometryInfeasible,
  ParseError,
  VersionUnsupported,
  TooFewPoints,
  IoError,
  InvalidArgument,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::AllPairsDegenerate: return "AllPairsDegenerate";
    case ErrorCode::InsufficientParallax: return "InsufficientParallax";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateBase: return "DegenerateBase";
    case ErrorCode::DivergedNumerically: return "DivergedNumerically";
    case ErrorCode::NegativeDepth: return "NegativeDepth";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::GeometryInfeasible: return "GeometryInfeasible";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// Errors that describe the geometry of the input rather than a malformed
// request. The CLI maps these to exit code 2.
constexpr bool is_numerical_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::InsufficientParallax:
    case ErrorCode::RankDeficient:
    case ErrorCode::DivergedNumerically:
    case ErrorCode::Disconnected:
    case ErrorCode::Degenerate:
    case ErrorCode::GeometryInfeasible:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace poseonly
