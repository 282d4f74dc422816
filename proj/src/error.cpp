#include "lfrm/error.hpp"

namespace lfrm {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::InsufficientPrecision: return "InsufficientPrecision";
    case Errc::NotIntegral: return "NotIntegral";
    case Errc::DyadicField: return "DyadicField";
    case Errc::TooLarge: return "TooLarge";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::InvalidParam: return "InvalidParam";
    case Errc::EqualParams: return "EqualParams";
    case Errc::LevelTooLow: return "LevelTooLow";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, std::string_view module, const std::string& message)
    : std::runtime_error(std::string(module) + ": " + std::string(errc_name(code)) + ": " +
                         message),
      code_(code),
      module_(module) {}

void raise(Errc code, std::string_view module, const std::string& message) {
  throw Error(code, module, message);
}

}  // namespace lfrm
