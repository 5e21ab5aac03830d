#pragma once

#include <stdexcept>
#include <string>

namespace shiftdenoise {

/// Invalid parameters or configuration (bad geometry, out-of-range knobs).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Problems with input data (missing coverage, malformed files).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace shiftdenoise
