#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fso {

enum class ErrorCode {
  EmptySeed,
  InvalidCharacter,
  MixedForm,
  BudgetExceeded,
  DegenerateGeometry,
  NotSubseed,
  InvalidArgument,
  InvalidFocalLevel,
  DuplicateEventId,
  IsolatedNode,
  SupportMismatch,
  Unreliable,
  AsymmetricConflicts,
  TooLarge,
  SchemaViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// command-line front end can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fso
