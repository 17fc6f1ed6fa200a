#pragma once

#include <stdexcept>
#include <string>

namespace maser {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters where a derived quantity is undefined (e.g. theta at omega1 == omega2, lambda == 0).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Operation requested outside the region where it is defined (not an engine, P == 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid input to an operation (bad scheme ratio, dt too large, vanishing channel, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two independent evaluation routes disagree, or a conservation law is broken.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace maser
