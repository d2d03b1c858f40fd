#pragma once

#include <stdexcept>
#include <string>

namespace safeasng {

/// Raised when a run or experiment is configured with values the library cannot honor
/// (dimension above the bitmask cap, Walsh basis too large, unknown problem name...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rejection sampling for safe seeds gave up.
class InfeasibleSeedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive oracle requested above its dimension cap.
class OracleUnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neither D nor D0 has a usable center.
class NoSafeCenterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace safeasng
