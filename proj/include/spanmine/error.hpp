#pragma once

#include <stdexcept>
#include <string>

namespace spanmine {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed input files (exchange files, TSVs, params files).
class FormatError : public Error {
 public:
  using Error::Error;
};

// External encoder returned something that does not follow the line protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Zero variance, empty span sets and similar inputs on which a quantity is undefined.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

}  // namespace spanmine
