#pragma once

#include <stdexcept>
#include <string>

namespace mdsaccel {

// Every failure raised by the library derives from Error so callers (the CLI in
// particular) can separate usage problems from runtime faults.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("gf256: zero has no multiplicative inverse") {}
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class SubsetError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class RequestError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class FetchError : public Error {
 public:
  enum class Kind { Connect, Timeout, Protocol, Insufficient };

  FetchError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace mdsaccel
