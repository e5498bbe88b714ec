#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace obp {

enum class ErrorCode {
  InvalidInstance,
  TopStrandMissing,
  BottomStrandMissing,
  NotIrreducible,
  NoConvergence,
  NotRightAdmissible,
  InconsistentY,
  NonIntegerGenus,
  OutOfChart,
  EmptySearchSpace,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::TopStrandMissing: return "TopStrandMissing";
    case ErrorCode::BottomStrandMissing: return "BottomStrandMissing";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotRightAdmissible: return "NotRightAdmissible";
    case ErrorCode::InconsistentY: return "InconsistentY";
    case ErrorCode::NonIntegerGenus: return "NonIntegerGenus";
    case ErrorCode::OutOfChart: return "OutOfChart";
    case ErrorCode::EmptySearchSpace: return "EmptySearchSpace";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace obp
