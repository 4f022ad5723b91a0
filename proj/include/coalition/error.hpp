#pragma once

#include <stdexcept>
#include <string>

namespace coalition {

enum class Errc {
  kConstantVector,
  kNotMonotone,
  kTooFewCandidates,
  kMTooLarge,
  kInvalidProfile,
  kRuleParse,
  kDimensionMismatch,
  kNumericalFailure,
  kStatusMismatch,
  kNotStrictWinner,
  kInstanceTooLarge,
  kZInfeasible,
  kConstructionFailed,
  kUnknownFamily,
  kParamOutOfRange,
  kGridTooCoarse,
  kMalformedInput,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::kConstantVector: return "ConstantVector";
    case Errc::kNotMonotone: return "NotMonotone";
    case Errc::kTooFewCandidates: return "TooFewCandidates";
    case Errc::kMTooLarge: return "MTooLarge";
    case Errc::kInvalidProfile: return "InvalidProfile";
    case Errc::kRuleParse: return "RuleParse";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kNumericalFailure: return "NumericalFailure";
    case Errc::kStatusMismatch: return "StatusMismatch";
    case Errc::kNotStrictWinner: return "NotStrictWinner";
    case Errc::kInstanceTooLarge: return "InstanceTooLarge";
    case Errc::kZInfeasible: return "ZInfeasible";
    case Errc::kConstructionFailed: return "ConstructionFailed";
    case Errc::kUnknownFamily: return "UnknownFamily";
    case Errc::kParamOutOfRange: return "ParamOutOfRange";
    case Errc::kGridTooCoarse: return "GridTooCoarse";
    case Errc::kMalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

}  // namespace coalition
