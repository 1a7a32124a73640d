#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vote_diffuse {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Index outside the profile's agent or candidate range.
class DimensionError : public Error {
public:
  using Error::Error;
};

// Out-of-range model parameter (k, p, eps, weights, ...).
class ParameterError : public Error {
public:
  using Error::Error;
};

// A finite schedule was asked for a step past its end.
class ScheduleExhausted : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

// Malformed text input. `line` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& message, const std::string& source = {})
      : Error(format(line, message, source)), line_(line), message_(message) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

  ParseError in_source(const std::string& source) const { return ParseError(line_, message_, source); }

private:
  static std::string format(std::size_t line, const std::string& message, const std::string& source) {
    std::string where = source;
    if (line != 0) where += (where.empty() ? "line " : ":") + std::to_string(line);
    return where.empty() ? message : where + ": " + message;
  }

  std::size_t line_;
  std::string message_;
};

class CorruptTrace : public Error {
public:
  using Error::Error;
};

class PolicyMismatch : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace vote_diffuse
