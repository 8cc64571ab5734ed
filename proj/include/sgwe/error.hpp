#pragma once

#include <stdexcept>
#include <string>

namespace sgwe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (ranges, shapes, schema).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested outside the sampled window.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Factorization or other numerical breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Hurst indices outside the Young-summable regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Picard iteration failed to contract.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// File or directory could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgwe
