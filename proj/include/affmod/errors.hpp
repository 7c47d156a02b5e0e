#pragma once

#include <stdexcept>
#include <string>

namespace affmod {

enum class ErrKind {
  ContextMismatch,
  FieldMismatch,
  SyntaxError,
  NotDivisible,
  InvalidInput,
  NotNilpotentWithin,
  NoInverseWithinDegree,
  FiberPointsNotFound,
  TransversalityViolated,
  CertificationFailed,
  BudgetExceeded,
  RootNotInField,
};

class Error : public std::runtime_error {
public:
  Error(ErrKind kind, std::string msg, long pos = -1)
      : std::runtime_error(std::move(msg)), kind(kind), pos(pos) {}
  ErrKind kind;
  long pos; // byte offset for syntax errors, -1 otherwise
};

[[noreturn]] inline void fail(ErrKind k, const std::string& msg, long pos = -1) {
  throw Error(k, msg, pos);
}

inline const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::ContextMismatch: return "ContextMismatch";
    case ErrKind::FieldMismatch: return "FieldMismatch";
    case ErrKind::SyntaxError: return "SyntaxError";
    case ErrKind::NotDivisible: return "NotDivisible";
    case ErrKind::InvalidInput: return "InvalidInput";
    case ErrKind::NotNilpotentWithin: return "NotNilpotentWithin";
    case ErrKind::NoInverseWithinDegree: return "NoInverseWithinDegree";
    case ErrKind::FiberPointsNotFound: return "FiberPointsNotFound";
    case ErrKind::TransversalityViolated: return "TransversalityViolated";
    case ErrKind::CertificationFailed: return "CertificationFailed";
    case ErrKind::BudgetExceeded: return "BudgetExceeded";
    case ErrKind::RootNotInField: return "RootNotInField";
  }
  return "Unknown";
}

} // namespace affmod
