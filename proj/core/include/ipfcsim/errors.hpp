#pragma once

#include <stdexcept>
#include <string>

namespace ipfcsim {

// Bad or inconsistent configuration input.  CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (singular system, DC-link collapse, ...).  CLI exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / output failure.  CLI exit code 4.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ipfcsim
