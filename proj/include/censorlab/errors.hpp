#pragma once

#include <stdexcept>
#include <string>

namespace censorlab {

// Error taxonomy mirrors the CLI exit codes: config/model problems are bad
// input (exit 2), budget errors are size limits (exit 3). Certification
// failures are ordinary return values, not exceptions.

struct model_error : std::runtime_error {
  explicit model_error(const std::string& what)
      : std::runtime_error("model error: " + what) {}
};

struct budget_error : std::runtime_error {
  explicit budget_error(const std::string& what)
      : std::runtime_error("budget error: " + what) {}
};

struct config_error : std::runtime_error {
  explicit config_error(const std::string& what)
      : std::runtime_error("config error: " + what) {}
};

}  // namespace censorlab
