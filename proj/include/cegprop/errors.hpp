#pragma once

#include <stdexcept>
#include <string>

namespace cegprop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural problems in models, observations or result files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents (bad JSON, missing fields, unparsable numbers).
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An edge sequence that is not a path of the graph it was given with.
class InvalidPathError : public Error {
 public:
  using Error::Error;
};

// A path set that no per-position edge subsets can represent.
class IncompatibleObservationError : public Error {
 public:
  using Error::Error;
};

// Conditioning on an event of probability zero.
class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

// Brute-force enumeration refused: path count above the configured cap.
class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cegprop
