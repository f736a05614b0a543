#include "bgw/errors.hpp"

namespace bgw {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNonConvergent: return "NON_CONVERGENT";
    case ErrorCode::kParameter: return "PARAMETER";
    case ErrorCode::kDomain: return "DOMAIN";
    case ErrorCode::kSyntax: return "SYNTAX";
    case ErrorCode::kConfig: return "CONFIG";
    case ErrorCode::kOverflow: return "OVERFLOW";
    case ErrorCode::kConstraint: return "CONSTRAINT";
    case ErrorCode::kDegenerateCovariance: return "DEGENERATE_COVARIANCE";
    case ErrorCode::kPrecondition: return "PRECONDITION";
    case ErrorCode::kUnsupportedForm: return "UNSUPPORTED_FORM";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

SyntaxError::SyntaxError(std::size_t position, const std::string& what)
    : Error(ErrorCode::kSyntax, what + " at offset " + std::to_string(position)),
      position_(position) {}

}  // namespace bgw
