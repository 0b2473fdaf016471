#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be parsed. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A per-pair precondition does not hold (e.g. a reference shorter than the n-gram order).
/// Batch scoring records such pairs as missing instead of aborting.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A metric was requested without the resource it needs (embedding table, lexicon, ...).
class MissingResource : public Error {
 public:
  using Error::Error;
};

}  // namespace semsim
