#pragma once

#include <stdexcept>
#include <string>

namespace parity {

// Raised when an exact computation would exceed the configured enumeration
// budget (spin cap, state count, combination count).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Raised for malformed configuration or instance documents.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace parity
