#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bgw {

enum class ErrorCode {
  kNonConvergent,
  kParameter,
  kDomain,
  kSyntax,
  kConfig,
  kOverflow,
  kConstraint,
  kDegenerateCovariance,
  kPrecondition,
  kUnsupportedForm,
};

const char* to_string(ErrorCode code) noexcept;

/// Base exception for every recoverable failure in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace bgw
