#pragma once

#include <stdexcept>
#include <string>

namespace fpc {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated precondition on an operation argument.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// Bad input data: malformed CSV, misaligned series, missing features.
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

// Model training cannot proceed (degenerate domains, too little data,
// no cascade passed the residue criterion).
class FitError : public Error {
 public:
  explicit FitError(const std::string& msg) : Error(msg) {}
};

// Serialized model payload problems.
class ModelIoError : public Error {
 public:
  explicit ModelIoError(const std::string& msg) : Error(msg) {}
};

}  // namespace fpc
