#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eigenbound {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Malformed mesh input; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to be positive definite is not.
class DefinitenessError : public Error {
 public:
  using Error::Error;
};

class KernelError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation's precondition (sizes, dimensions, tags).
class ContractError : public Error {
 public:
  using Error::Error;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Robin coefficient ratio g3/g3~ is undefined on part of the boundary.
class IllPosedRatioError : public Error {
 public:
  using Error::Error;
};

}  // namespace eigenbound
