#pragma once

#include <cstddef>
#include <memory>

#include "perfenv/profiles.hpp"

namespace perfenv {

/// One run of one configuration. Each call to step() advances the run to the
/// next checkpoint and returns the best-so-far quality recorded there.
class Run {
 public:
  virtual ~Run() = default;

  virtual double step() = 0;
  /// Number of checkpoints reached so far.
  virtual std::size_t position() const = 0;
};

/// Supplies runs to the racer. Implementations must be deterministic (the
/// same configuration always yields the same profile, including after a
/// restart) and per-run monotone.
class Evaluator {
 public:
  virtual ~Evaluator() = default;

  virtual std::size_t size() const = 0;
  virtual ConfigId config_id(std::size_t row) const = 0;
  virtual const CheckpointSchedule& schedule() const = 0;
  /// Starts a fresh run of the configuration at `row`.
  virtual std::unique_ptr<Run> start(std::size_t row) const = 0;
};

/// Replays stored profiles; step(k) returns matrix[row][k].
class ReplayEvaluator final : public Evaluator {
 public:
  explicit ReplayEvaluator(std::shared_ptr<const QualityMatrix> matrix);
  explicit ReplayEvaluator(QualityMatrix matrix);

  std::size_t size() const override { return matrix_->size(); }
  ConfigId config_id(std::size_t row) const override { return (*matrix_)[row].config_id; }
  const CheckpointSchedule& schedule() const override { return matrix_->schedule(); }
  std::unique_ptr<Run> start(std::size_t row) const override;

  const QualityMatrix& matrix() const noexcept { return *matrix_; }

 private:
  std::shared_ptr<const QualityMatrix> matrix_;
};

}  // namespace perfenv
