#pragma once

#include <stdexcept>
#include <string>

namespace admflow {

// Failure taxonomy shared by all modules. The CLI maps HypothesisNotMet to
// exit code 2, everything else to 1.
enum class ErrorKind {
  InvalidInput,        // malformed data, class not Kaehler, bad initialization
  HypothesisNotMet,    // P does not have exactly one root in (-1,1), etc.
  NumericFailure,      // bracket expansion exhausted, cross-check disagreement
  InvariantViolation,  // exact arithmetic self-check failed (always a bug)
  PositivityLoss,      // flow state left the admissible cone
  NotApplicable,       // operation requires an anti-canonical class
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::HypothesisNotMet: return "hypothesis-not-met";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::InvariantViolation: return "invariant-violation";
    case ErrorKind::PositivityLoss: return "positivity-loss";
    case ErrorKind::NotApplicable: return "not-applicable";
  }
  return "unknown";
}

}  // namespace admflow
