#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace yamflat {

enum class ErrorCode {
  InvalidLattice,
  InvalidInput,
  InvalidGroup,
  EnumerationOverflow,
  Unsupported,
  NotIsometricAction,
  IrreducibleUnexpected,
  NonIntegerMultiplicity,
  IncompleteInput,
  UndecidableComparison,
  NonPositiveScal,
  GridTooCoarse,
  BudgetExhausted,
  ParseError,
};

std::string_view error_code_name(ErrorCode code);

// All library failures surface as this exception; the code selects the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace yamflat
