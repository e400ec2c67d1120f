#pragma once

#include <stdexcept>
#include <string>

namespace shiftapprox {

// Base of every library failure that is not a plain precondition violation.
// Precondition violations throw std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested basis element is numerically zero, i.e. the shifts are
// linearly dependent.
class DegenerateBasis : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class IllConditioned : public Error {
 public:
  using Error::Error;
};

// A truncated tail (or a derivative of it) cannot be certified from the
// available decay information.
class InsufficientDecay : public Error {
 public:
  using Error::Error;
};

class SampleOutsideClass : public Error {
 public:
  using Error::Error;
};

class BoundaryViolation : public Error {
 public:
  using Error::Error;
};

class TruncationTooSmall : public Error {
 public:
  using Error::Error;
};

}  // namespace shiftapprox
