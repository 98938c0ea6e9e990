#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace magspec {

inline std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

// Invalid argument for a mathematical operation (x <= 0 for log_gamma, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A value became NaN or infinite.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iteration or refinement failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + format_residual(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Requested result not representable at the working precision.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, unsigned required_bits)
      : std::runtime_error(what), required_bits_(required_bits) {}
  unsigned required_bits() const noexcept { return required_bits_; }

 private:
  unsigned required_bits_;
};

// A hypothesis of the reduction is violated (Robin coefficient too small, ...).
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration validation; collects every violated field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) out += " " + s + ";";
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace magspec
