#pragma once

#include <stdexcept>
#include <string>

namespace qfo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Caller passed a value outside an operation's domain (zero focal length,
/// non-positive width, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Two fields, or a field and a mask, do not live on the same grid.
class GridMismatch : public Error {
public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// A numerical validity guard (aliasing, band limit, far field, shaper
/// conditions) refused the request. `guard()` names the guard and
/// `safe_range()` describes parameters that would have been accepted.
class GuardViolation : public Error {
public:
  GuardViolation(std::string guard, std::string detail, std::string safe_range)
      : Error(guard + ": " + detail + " (safe range: " + safe_range + ")"),
        guard_(std::move(guard)), safe_range_(std::move(safe_range)) {}

  const std::string& guard() const noexcept { return guard_; }
  const std::string& safe_range() const noexcept { return safe_range_; }

private:
  std::string guard_;
  std::string safe_range_;
};

} // namespace qfo
