#include "fso/error.hpp"

namespace fso {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptySeed: return "EmptySeed";
    case ErrorCode::InvalidCharacter: return "InvalidCharacter";
    case ErrorCode::MixedForm: return "MixedForm";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::NotSubseed: return "NotSubseed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidFocalLevel: return "InvalidFocalLevel";
    case ErrorCode::DuplicateEventId: return "DuplicateEventId";
    case ErrorCode::IsolatedNode: return "IsolatedNode";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::Unreliable: return "Unreliable";
    case ErrorCode::AsymmetricConflicts: return "AsymmetricConflicts";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

}  // namespace fso
