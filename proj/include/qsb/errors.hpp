#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsb {

enum class ErrorKind {
  NonBracketable,
  MultipleCrossings,
  NonMonotone,
  TooFewChains,
  BreakpointLimit,
  InvalidArgument,
  Parse,
};

std::string_view to_string(ErrorKind kind);

// Numerical failure raised by the library. The kind is machine-readable so the
// CLI can emit it as a structured record.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qsb
