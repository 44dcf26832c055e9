#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace srcv {

enum class ErrorKind {
  InvalidArgument,
  NotPSD,
  AsymmetricInput,
  UnknownModel,
  UnknownPayoff,
  DerivativeUnavailable,
  EmptySample,
  MissingScenario,
  InvalidCoordinate,
  OrderMismatch,
  TreeTooLarge,
  DegenerateBaseline,
  KappaOutOfRange,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace srcv
