#pragma once

#include <stdexcept>
#include <string>

namespace iclust {

// Malformed or unreadable input data (CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid hyperparameters, ranges or configuration (CLI exit code 3).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal numerical failure, e.g. a posterior scale matrix that cannot be
// factorized even after jitter (CLI exit code 4).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace iclust
