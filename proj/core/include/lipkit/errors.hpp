#pragma once

#include <stdexcept>
#include <string>

namespace lipkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: non-square matrix, subset mismatch, bad JSON shape.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Zero functional where a nonzero norm is required.
class DegenerateError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class RangeError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class GridTooCoarseError : public Error {
 public:
  GridTooCoarseError(const std::string& what, int needed_resolution)
      : Error(what), needed_resolution_(needed_resolution) {}
  int needed_resolution() const noexcept { return needed_resolution_; }

 private:
  int needed_resolution_;
};

class SamplerExhausted : public Error {
 public:
  using Error::Error;
};

// A step corrector output broke one of the audited properties (a)-(e).
class ContractViolation : public Error {
 public:
  ContractViolation(char property, const std::string& what)
      : Error(what), property_(property) {}
  char property() const noexcept { return property_; }

 private:
  char property_;
};

}  // namespace lipkit
