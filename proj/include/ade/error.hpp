#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ade {

enum class ErrorCode {
  MismatchedVars,
  PrecisionOutOfRange,
  NotUnit,
  RootNotInField,
  NotInMaximalIdeal,
  InvalidField,
  NotInvertible,
  OrderTooLow,
  ShapeMismatch,
  VariableCollision,
  NotAFactorization,
  CubicRootsNotInField,
  UnsupportedVerdict,
  SyntaxError,
  UnknownVariable,
  DivisionByCharacteristic,
  CertificateMismatch,
  SearchLimit,
  InvalidArgument,
  Io,
};

std::string_view code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> location = std::nullopt)
      : std::runtime_error(message), code_(code), location_(location) {}

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> location() const { return location_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> location_;
};

}  // namespace ade
