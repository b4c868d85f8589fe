#pragma once

#include <stdexcept>
#include <string>

namespace gridner {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (bad UTF-8, bad records, misaligned spans, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// A binary dataset is missing one of its two classes.
class EmptyClass : public Error {
 public:
  using Error::Error;
};

class TooFewRecords : public Error {
 public:
  using Error::Error;
};

/// Bias correction requested before any EMA update happened.
class ZeroSteps : public Error {
 public:
  using Error::Error;
};

}  // namespace gridner
