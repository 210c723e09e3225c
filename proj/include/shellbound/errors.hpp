#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace shellbound {

/// Invalid input geometry or configuration (degenerate polygon, clearance violation, ...).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (negative radius, beta <= 0, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised when the eigenvalue scan finds no sign change of the shooting defect.
/// Carries the (lambda, defect) pairs that were sampled.
class BracketingError : public std::runtime_error {
public:
  BracketingError(const std::string& what, std::vector<std::pair<double, double>> scan)
      : std::runtime_error(what), scan_(std::move(scan)) {}

  const std::vector<std::pair<double, double>>& scan() const noexcept { return scan_; }

private:
  std::vector<std::pair<double, double>> scan_;
};

/// Iterative solver hit its iteration cap. Carries the objective history.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

private:
  std::vector<double> trace_;
};

}  // namespace shellbound
