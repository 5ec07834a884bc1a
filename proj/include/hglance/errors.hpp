#ifndef HGLANCE_ERRORS_HPP_
#define HGLANCE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace hglance {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error {
  using Error::Error;
};
struct EmptyInput : Error {
  using Error::Error;
};
struct PoseOutOfWorkspace : Error {
  using Error::Error;
};
struct DegenerateDirection : Error {
  using Error::Error;
};
struct SigmaTooSmall : Error {
  using Error::Error;
};
struct OrderViolation : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct ChecksumMismatch : Error {
  using Error::Error;
};
struct NonFiniteGradient : Error {
  using Error::Error;
};

// Configuration problems carry their own family so the CLI can map them to
// exit code 2 while everything else maps to 3.
struct ConfigError : Error {
  using Error::Error;
};
struct UnknownKey : ConfigError {
  using ConfigError::ConfigError;
};
struct TypeError : ConfigError {
  using ConfigError::ConfigError;
};
struct RangeError : ConfigError {
  using ConfigError::ConfigError;
};

}  // namespace hglance

#endif  // HGLANCE_ERRORS_HPP_
