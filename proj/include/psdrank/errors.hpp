#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psdrank {

// Machine-readable failure codes; the CLI prints these verbatim.
enum class ErrorCode {
  ZeroRow,
  NegativeEntry,
  NoOnesInSpan,
  DimensionMismatch,
  DegenerateDimension,
  NotNested,
  RankMismatch,
  SolverStall,
  DegenerateSum,
  BudgetExceeded,
  NotMember,
  WitnessInvalid,
  PreconditionFailed,
  NoFeasibleStart,
  ParseError,
  CacheCorrupt,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroRow: return "ZeroRow";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NoOnesInSpan: return "NoOnesInSpan";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateDimension: return "DegenerateDimension";
    case ErrorCode::NotNested: return "NotNested";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::SolverStall: return "SolverStall";
    case ErrorCode::DegenerateSum: return "DegenerateSum";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotMember: return "NotMember";
    case ErrorCode::WitnessInvalid: return "WitnessInvalid";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::NoFeasibleStart: return "NoFeasibleStart";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::CacheCorrupt: return "CacheCorrupt";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace psdrank
