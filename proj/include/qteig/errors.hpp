#pragma once

#include <stdexcept>
#include <string>

namespace qteig {

enum class ErrorKind {
  Domain,
  InvalidSymbol,
  InconsistentConstant,
  InvalidInput,
  SectionTooSmall,
  PrefixTooShort,
  Singular,
  ConvergenceFailure,
  OnCurve,
  FactorizationUnstable,
  ClusteredRoots,
  DerivativeVanishes,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` tells callers which
/// failure occurred so they can classify it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qteig
