#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ltesim {

enum class ErrorKind {
  EmptyDomain,
  DisconnectedDomain,
  ProjectionAmbiguous,
  NoConvergence,
  StepLimitExceeded,
  InsufficientSamples,
  RareEvent,
  ConfigInvalid,
  IoFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Configuration errors also name the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(ErrorKind::ConfigInvalid, field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace ltesim
