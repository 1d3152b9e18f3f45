#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bookreel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Referential-integrity or schema violation found while building a catalog.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operation called with arguments of incompatible dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

}  // namespace bookreel
