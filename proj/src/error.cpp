#include "perco/error.hpp"

namespace perco {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSite: return "InvalidSite";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::NotStrictlyOrdered: return "NotStrictlyOrdered";
    case ErrorCode::NotStrictlySeparated: return "NotStrictlySeparated";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::EmptyG: return "EmptyG";
    case ErrorCode::SupportTooLarge: return "SupportTooLarge";
    case ErrorCode::ZeroProbabilityCondition: return "ZeroProbabilityCondition";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::IncompatibleBases: return "IncompatibleBases";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::NonTranslationInvariantModel: return "NonTranslationInvariantModel";
  }
  return "Unknown";
}

}  // namespace perco
