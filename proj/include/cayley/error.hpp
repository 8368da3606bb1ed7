#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cayley {

enum class ErrorCode {
  UnknownKind,
  InvalidParams,
  MalformedElement,
  NotSymmetric,
  ContainsIdentity,
  Duplicate,
  MemoryBudgetExceeded,
  HorizonExceeded,
  RadiusOutOfRange,
  EmptySet,
  BadParams,
  ExitNotFound,
  PreconditionUnmet,
  NoFamilyForKind,
  NotApplicable,
  InsufficientData,
  EmptyGeneratingSet,
  Usage,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported through this type. The code is
/// stable and is what callers (and tests) should branch on; the message is
/// for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::int64_t> last_radius = std::nullopt);

  ErrorCode code() const noexcept { return code_; }

  /// For MemoryBudgetExceeded: the last radius whose ball was fully built.
  std::optional<std::int64_t> last_completed_radius() const noexcept { return last_radius_; }

 private:
  ErrorCode code_;
  std::optional<std::int64_t> last_radius_;
};

}  // namespace cayley
