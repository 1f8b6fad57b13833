#pragma once

#include <stdexcept>
#include <string>

namespace ntcubic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPrime : public Error {
 public:
  using Error::Error;
};

/// A search or table would exceed the enumeration guard.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// An element was passed at the wrong level of the tower.
class WrongLevel : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidForm : public Error {
 public:
  using Error::Error;
};

}  // namespace ntcubic
