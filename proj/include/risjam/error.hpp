#pragma once

#include <stdexcept>
#include <string>

namespace risjam {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Queue with utilization >= 1; mean delay is undefined.
class UnstableQueueError : public Error
{
public:
  explicit UnstableQueueError(double utilization)
    : Error("unstable queue: utilization " + std::to_string(utilization) + " >= 1"),
      utilization_(utilization)
  {}

  double utilization() const noexcept { return utilization_; }

private:
  double utilization_;
};

enum class ConfigErrorKind
{
  missing_file,
  syntax,
  unknown_key,
  non_square,
  invalid_value,
};

class ConfigError : public Error
{
public:
  ConfigError(ConfigErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}

  ConfigErrorKind kind() const noexcept { return kind_; }

private:
  ConfigErrorKind kind_;
};

} // namespace risjam
