#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace perco {

enum class ErrorCode {
  InvalidSite,
  InvalidModel,
  LevelMismatch,
  NotStrictlyOrdered,
  NotStrictlySeparated,
  NoPath,
  EmptyG,
  SupportTooLarge,
  ZeroProbabilityCondition,
  ZeroDenominator,
  IncompatibleBases,
  UnsupportedModel,
  NonTranslationInvariantModel,
};

std::string_view to_string(ErrorCode code);

/// All library failures carry a machine-readable code; the message names the
/// offending input where one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace perco
