#pragma once

#include <stdexcept>
#include <string>

namespace kex {

// Base of every error the library throws. Callers that only need a message
// can catch this; the CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document (not JSON, wrong key types, missing keys).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed document describing an illegal graph or instance.
class ModelError : public Error {
 public:
  using Error::Error;
};

// A configured size limit (units, signatures, table entries, arcs) was hit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// An algorithm was asked to run outside the regime it supports.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant; never caused by input alone.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace kex
