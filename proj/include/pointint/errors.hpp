#pragma once

#include <stdexcept>
#include <string>

namespace pointint {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// 1 + B is singular on the grid: the potential sits on a zero-energy
/// resonance and the scattering length is infinite.
class ResonanceError : public Error {
 public:
  using Error::Error;
};

/// The lowest eigenvalue of 1 + JX is degenerate within tolerance.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A tuning target has no sign change in the scanned parameter range.
class UnreachableError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; `key` names the offending config entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace pointint
