#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace perfenv {

/// Input violates a documented invariant (non-monotone trace, bad CSV,
/// mismatched schedules, ...). The CLI maps this to exit code 3.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An evaluator failed while producing a run for one configuration.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(std::uint64_t config_id, const std::string& what)
      : std::runtime_error("configuration " + std::to_string(config_id) + ": " + what),
        config_id_(config_id) {}

  std::uint64_t config_id() const noexcept { return config_id_; }

 private:
  std::uint64_t config_id_;
};

}  // namespace perfenv
