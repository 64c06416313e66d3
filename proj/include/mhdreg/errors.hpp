#ifndef MHDREG_ERRORS_HPP_
#define MHDREG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mhdreg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidExponent : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class UnsupportedGrid : public Error {
 public:
  using Error::Error;
};

class NotSolenoidal : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class TimeOrder : public Error {
 public:
  using Error::Error;
};

class WindowTooShort : public Error {
 public:
  using Error::Error;
};

/// The test function is not localized enough to stand in for a field on R^3.
class NonLocalized : public Error {
 public:
  using Error::Error;
};

class BadMagic : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersion : public Error {
 public:
  using Error::Error;
};

class TruncatedFile : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A malformed configuration entry. `key()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}

  [[nodiscard]] const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Last finite diagnostics captured before a blow-up.
struct BlowupDiagnostics {
  double t = 0.0;
  double kinetic_energy = 0.0;   // ||u||_2^2
  double magnetic_energy = 0.0;  // ||b||_2^2
  std::size_t step = 0;
};

class BlowupDetected : public Error {
 public:
  BlowupDetected(double t, BlowupDiagnostics last)
      : Error("non-finite state detected at t = " + std::to_string(t)),
        t_(t),
        last_(last) {}

  [[nodiscard]] double time() const noexcept { return t_; }
  [[nodiscard]] const BlowupDiagnostics& last_finite() const noexcept { return last_; }

 private:
  double t_;
  BlowupDiagnostics last_;
};

}  // namespace mhdreg

#endif  // MHDREG_ERRORS_HPP_
