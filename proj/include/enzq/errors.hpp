#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "enzq/types.hpp"

namespace enzq {

// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A data structure violates one of its documented invariants. The message
// starts with the name of the violated invariant.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string invariant, const std::string& detail)
      : std::invalid_argument(invariant + ": " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

// Iterative solver failed to converge; carries the last iterate.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, Complex last_iterate, double last_residual)
      : std::runtime_error(what), last_iterate_(last_iterate), last_residual_(last_residual) {}
  Complex last_iterate() const noexcept { return last_iterate_; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  Complex last_iterate_;
  double last_residual_;
};

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Time integration produced a state outside the physical tolerances.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Configuration problems, all of them at once.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration";
    for (const auto& s : v) out += "\n  " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace enzq
