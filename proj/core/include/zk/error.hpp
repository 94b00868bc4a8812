#pragma once

#include <stdexcept>
#include <string>

namespace zk {

// Base for every failure that is a property of the inputs (bad parameters,
// inadmissible domains, unstable runs). The CLI maps these to exit code 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration value that fails validation; key() names the offender.
class ConfigError : public DomainError {
 public:
  ConfigError(std::string key, const std::string& what)
      : DomainError(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class LinearSolverError : public DomainError {
 public:
  using DomainError::DomainError;
};

class BlowupError : public DomainError {
 public:
  BlowupError(double time, const std::string& what)
      : DomainError(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace zk
