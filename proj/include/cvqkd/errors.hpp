#pragma once

#include <stdexcept>
#include <string>

namespace cvqkd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

// Argument outside the domain of an operation (bad transmittance, negative noise, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DomainError"; }
};

class NonPhysicalMatrix : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NonPhysicalMatrix"; }
};

// Homodyne conditioning on a quadrature with (numerically) zero variance.
class DegenerateMeasurement : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DegenerateMeasurement"; }
};

// No physical correlation exists for the requested output variance.
class EmptyRegion : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "EmptyRegion"; }
};

class NoPositiveRate : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NoPositiveRate"; }
};

}  // namespace cvqkd
