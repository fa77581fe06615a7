#pragma once

#include <stdexcept>
#include <string>

namespace rinorm {

// Base of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text: ISO 8601 values, config files, model files.
class ParseError : public Error {
 public:
  ParseError(std::string component, const std::string& message)
      : Error(message), component_(std::move(component)) {}

  const std::string& component() const noexcept { return component_; }

 private:
  std::string component_;
};

// Calendar arithmetic left the supported year range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Corpus, model or prediction data that violates its schema or invariants.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace rinorm
