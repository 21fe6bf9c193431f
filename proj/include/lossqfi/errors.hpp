#pragma once

#include <stdexcept>
#include <string>

namespace lossqfi {

enum class ErrorCode {
  invalid_dimension,
  invalid_input,
  cutoff_overflow,
  domain,
  degenerate_state,
  parse,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::cutoff_overflow: return "cutoff-overflow";
    case ErrorCode::domain: return "domain";
    case ErrorCode::degenerate_state: return "degenerate-state";
    case ErrorCode::parse: return "parse";
  }
  return "unknown";
}

/// Every failure raised by the engine carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lossqfi
