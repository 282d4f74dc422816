#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lfrm {

enum class Errc {
  DivisionByZero,
  PrecisionExhausted,
  InsufficientPrecision,
  NotIntegral,
  DyadicField,
  TooLarge,
  DimensionMismatch,
  NotSymmetric,
  FieldMismatch,
  InvalidParam,
  EqualParams,
  LevelTooLow,
  ParseError,
};

std::string_view errc_name(Errc code);

// Every failure raised by the library carries the module that produced it.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string_view module, const std::string& message);

  Errc code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  Errc code_;
  std::string module_;
};

[[noreturn]] void raise(Errc code, std::string_view module, const std::string& message);

}  // namespace lfrm
