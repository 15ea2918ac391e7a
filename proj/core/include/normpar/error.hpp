#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace normpar {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invariant-violating input (bad grid, bad measure, bad file).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Two functions that do not live on the same labeled grid.
class PairingMismatch : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A certificate that cannot even be checked (missing fields, non-unimodular lambda).
class MalformedCertificate : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind { lexical, syntax, unknown_identifier, arity, undeclared_variable };

// Expression parse failure. `position` is 1-based into the source string.
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t position, const std::string& what)
      : Error(what + " at position " + std::to_string(position)), kind_(kind), position_(position) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

 private:
  ParseErrorKind kind_;
  std::size_t position_;
};

enum class EvalErrorKind { division_by_zero, domain, unbound_variable };

class EvalError : public Error {
 public:
  EvalError(EvalErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  EvalErrorKind kind() const noexcept { return kind_; }

 private:
  EvalErrorKind kind_;
};

}  // namespace normpar
