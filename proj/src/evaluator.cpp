#include "perfenv/evaluator.hpp"

#include <stdexcept>

#include "perfenv/error.hpp"

namespace perfenv {
namespace {

class ReplayRun final : public Run {
 public:
  explicit ReplayRun(const PerformanceProfile& profile) : profile_(profile) {}

  double step() override {
    if (position_ >= profile_.quality.size()) {
      throw EvaluationError(profile_.config_id, "run stepped past the final checkpoint");
    }
    return profile_.quality[position_++];
  }

  std::size_t position() const override { return position_; }

 private:
  const PerformanceProfile& profile_;
  std::size_t position_ = 0;
};

}  // namespace

ReplayEvaluator::ReplayEvaluator(std::shared_ptr<const QualityMatrix> matrix) : matrix_(std::move(matrix)) {
  if (!matrix_) throw std::invalid_argument("null matrix");
}

ReplayEvaluator::ReplayEvaluator(QualityMatrix matrix)
    : matrix_(std::make_shared<const QualityMatrix>(std::move(matrix))) {}

std::unique_ptr<Run> ReplayEvaluator::start(std::size_t row) const {
  if (row >= matrix_->size()) throw std::out_of_range("configuration row out of range");
  return std::make_unique<ReplayRun>((*matrix_)[row]);
}

}  // namespace perfenv
