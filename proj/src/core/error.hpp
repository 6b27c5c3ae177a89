#pragma once

#include <stdexcept>
#include <string>

namespace vofd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing, unreadable or unwritable.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported image file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter value or config key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Shape/size contract violation between runtime objects.
class DimensionError : public Error {
 public:
  using Error::Error;
};

}  // namespace vofd
