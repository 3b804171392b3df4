#pragma once

#include <stdexcept>
#include <string>

namespace mngu {

// Invalid configuration value or incompatible dimensions. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API misuse: violated precondition, stale state. CLI exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite loss or gradient during training. CLI exit code 3.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure. CLI exit code 4.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mngu
