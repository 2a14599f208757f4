#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace syncnet {

/// Pivoted elimination hit a pivot below the singularity threshold.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The coupling graph is disconnected where connectivity is required.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation produced non-finite or runaway state.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// An estimator design violates its construction requirements.
class DesignError : public std::runtime_error {
 public:
  explicit DesignError(const std::string& what, double epsilon_bound = 0.0)
      : std::runtime_error(what), epsilon_bound_(epsilon_bound) {}
  /// Largest feasible epsilon when known, 0 otherwise.
  double epsilon_bound() const noexcept { return epsilon_bound_; }

 private:
  double epsilon_bound_;
};

/// Scenario configuration failed validation. Carries every violation found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace syncnet
