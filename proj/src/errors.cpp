#include "qsb/errors.hpp"

namespace qsb {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonBracketable: return "NonBracketable";
    case ErrorKind::MultipleCrossings: return "MultipleCrossings";
    case ErrorKind::NonMonotone: return "NonMonotone";
    case ErrorKind::TooFewChains: return "TooFewChains";
    case ErrorKind::BreakpointLimit: return "BreakpointLimit";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace qsb
