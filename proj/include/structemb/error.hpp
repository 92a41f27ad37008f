#pragma once

#include <stdexcept>
#include <string>

namespace structemb {

enum class ErrorCode {
  EmptyInput,
  UnbalancedParens,
  UnexpectedToken,
  DuplicateVariable,
  UndeclaredVariable,
  Unreadable,
  DimMismatch,
  EmptyTable,
  ZeroNorm,
  PartitionOverflow,
  UnsupportedAspect,
  InsufficientPairs,
  InsufficientPositives,
  MalformedRecord,
  BadFormat,
  Infeasible,
  Degenerate,
  UnknownLabel,
  SingleClass,
  NonFiniteLoss,
  EmptyData,
  BadConfig,
};

const char* error_code_name(ErrorCode code);

// Every recoverable failure in the library surfaces as this type; the CLI
// maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace structemb
