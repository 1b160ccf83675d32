#pragma once

#include <stdexcept>
#include <string>

namespace swarmsim {

/// Base for every error raised by the simulator library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// More distinct addresses requested than the address space holds.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// File could not be read/written, or its contents violate the schema or an
/// overlay invariant.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Gini / Lorenz requested on a series with no mass.
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

/// Results that cannot be merged; `field()` names the first mismatch.
class IncompatibleRuns : public Error {
 public:
  explicit IncompatibleRuns(std::string field)
      : Error("incompatible runs: mismatched " + field), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace swarmsim
