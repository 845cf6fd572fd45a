#pragma once

#include <stdexcept>
#include <string>

namespace levylap {

/// Bad input to an operation (violated precondition).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An ODE solve or quadrature produced non-finite values.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration (unknown key, wrong type, bad value).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levylap
