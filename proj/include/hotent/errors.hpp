#pragma once

#include <stdexcept>
#include <string>

namespace hotent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class InvalidConfiguration : public Error {
public:
  using Error::Error;
};

/// Raised by the non-degenerate builder when the resonators share a frequency.
class DegenerateConfiguration : public InvalidConfiguration {
public:
  using InvalidConfiguration::InvalidConfiguration;
};

class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// The adaptive integrator could not meet its tolerance above the step floor.
class StiffnessError : public NumericalFailure {
public:
  StiffnessError(const std::string& what, double time_reached)
      : NumericalFailure(what), time_reached_(time_reached) {}
  double time_reached() const noexcept { return time_reached_; }

private:
  double time_reached_;
};

/// Trace drift or negative eigenvalues beyond the allowed budget.
class IntegrationQualityError : public NumericalFailure {
public:
  IntegrationQualityError(const std::string& what, double time_reached)
      : NumericalFailure(what), time_reached_(time_reached) {}
  double time_reached() const noexcept { return time_reached_; }

private:
  double time_reached_;
};

class NonUniqueSteadyState : public NumericalFailure {
public:
  NonUniqueSteadyState(const std::string& what, int null_dimension)
      : NumericalFailure(what), null_dimension_(null_dimension) {}
  int null_dimension() const noexcept { return null_dimension_; }

private:
  int null_dimension_;
};

/// The polaron map leaks norm out of the truncated space.
class TruncationWarning : public NumericalFailure {
public:
  using NumericalFailure::NumericalFailure;
};

} // namespace hotent

namespace hotent {

/// Configuration error tied to a dotted key path of the input document.
class ConfigError : public InvalidConfiguration {
public:
  ConfigError(const std::string& key_path, const std::string& what)
      : InvalidConfiguration(key_path.empty() ? what : key_path + ": " + what), key_path_(key_path) {}
  const std::string& key_path() const noexcept { return key_path_; }

private:
  std::string key_path_;
};

} // namespace hotent
