#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cswkit {

/// Base class for every error raised by cswkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A JSONL or data file could not be parsed. `line()` is 1-based, 0 when the
/// failure is not tied to a particular line.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& message)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) +
              ": " + message),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// A value violates a documented invariant or precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The built-in backend does not support the requested language.
class UnsupportedLanguageError : public Error {
 public:
  using Error::Error;
};

/// Invalid RunConfig; `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error("config: " + field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Failure talking to the LLM service. HTTP status is 0 for connection-level
/// failures.
class TransportError : public Error {
 public:
  TransportError(const std::string& message, int status, bool retryable)
      : Error(message), status_(status), retryable_(retryable) {}

  int status() const noexcept { return status_; }
  bool retryable() const noexcept { return retryable_; }

 private:
  int status_;
  bool retryable_;
};

/// Placeholders survived the filling step after every retry.
class ResidualMaskError : public Error {
 public:
  ResidualMaskError(const std::string& message, std::string placeholder_output,
                    std::string filled_output)
      : Error(message),
        placeholder_output_(std::move(placeholder_output)),
        filled_output_(std::move(filled_output)) {}

  const std::string& placeholder_output() const noexcept {
    return placeholder_output_;
  }
  const std::string& filled_output() const noexcept { return filled_output_; }

 private:
  std::string placeholder_output_;
  std::string filled_output_;
};

/// A model reply could not be turned into the expected shape (sentence,
/// verdict) after every retry.
class InvalidOutputError : public Error {
 public:
  InvalidOutputError(const std::string& message, std::string last_response)
      : Error(message), last_response_(std::move(last_response)) {}

  const std::string& last_response() const noexcept { return last_response_; }

 private:
  std::string last_response_;
};

/// The judge never produced a readable A/B verdict.
class InvalidVerdictError : public InvalidOutputError {
 public:
  using InvalidOutputError::InvalidOutputError;
};

}  // namespace cswkit
