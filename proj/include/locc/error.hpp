#pragma once

#include <stdexcept>
#include <string>

namespace locc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched or unsupported subsystem dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix, vector or distribution that fails a physical validity check.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input. `field()` names the offending location, e.g.
/// "states[2].prob".
class InputError : public Error {
 public:
  InputError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)), message_(what) {}

  const std::string& field() const noexcept { return field_; }
  /// The description without the field prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

}  // namespace locc
