#pragma once

#include <stdexcept>
#include <string>

namespace qkr {

// Parameter outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inputs that are individually valid but do not belong together
// (band built for another kappa, mismatched basis sizes, ...).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Probability reached the edge of the truncated basis.
class EdgeGuardError : public std::runtime_error {
 public:
  EdgeGuardError(int trajectory, int kick, double edge_occupation);
  int trajectory() const noexcept { return trajectory_; }
  int kick() const noexcept { return kick_; }
  double edge_occupation() const noexcept { return edge_occupation_; }

 private:
  int trajectory_;
  int kick_;
  double edge_occupation_;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qkr
