#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "perfenv/evaluator.hpp"
#include "perfenv/profiles.hpp"
#include "perfenv/racing.hpp"

namespace perfenv {

/// Ground truth from evaluating every configuration to the full budget.
struct TruthTable {
  QualityMatrix matrix;
  double pool_fraction = 0.01;
  ConfigId true_best = 0;
  /// top_fraction(matrix, pool_fraction); true_best is its first element
  std::vector<ConfigId> true_top_set;
};

TruthTable build_truth(QualityMatrix matrix, double pool_fraction);

/// Runs every configuration of `evaluator` to the full budget.
QualityMatrix full_evaluation(const Evaluator& evaluator);

/// Throws ValidationError if the result and truth describe different
/// configuration spaces (count or schedule).
void check_compatible(const RacingResult& result, const TruthTable& truth);

double speedup(const RacingResult& result, const TruthTable& truth);
bool overlap_top(const RacingResult& result, const TruthTable& truth);
/// Percentage of the true top set found in the final pool.
double overlap_fraction(const RacingResult& result, const TruthTable& truth);

struct FigureRow {
  VirtualTime time = 0;
  std::string series;
  double value = 0.0;
};

/// Series label for a fraction, e.g. 0.01 -> "1", 0.005 -> "0.5".
std::string percent_label(double fraction);

/// Long-format plot series: per checkpoint the top configuration's
/// profile (`top_pp`), each exact cutoff line (`cutoff_<pct>`), the top
/// configuration's rank (`rank_top`) and each cutoff set's worst member rank
/// (`rank_cutoff_<pct>`).
std::vector<FigureRow> figure_data(const QualityMatrix& matrix, std::span<const double> fractions);

struct RepetitionMetrics {
  std::uint64_t seed = 0;
  double speedup = 0.0;
  bool overlap_top = false;
  double overlap_fraction = 0.0;
  VirtualTime total_virtual_cost = 0;
};

/// One row shaped like the accuracy table: configuration count, mean
/// speedup, percent of repetitions that found the best configuration and
/// mean overlap with the true top set.
struct ExperimentRow {
  std::string domain;
  std::size_t configs = 0;
  int repetitions = 0;
  double mean_speedup = 0.0;
  double overlap_top_percent = 0.0;
  double mean_overlap_percent = 0.0;
};

struct ExperimentReport {
  ExperimentRow row;
  std::vector<RepetitionMetrics> runs;
};

ExperimentRow summarize(std::string domain, std::size_t configs, std::span<const RepetitionMetrics> runs);

/// Repetition i uses seed params.seed + i.
ExperimentReport experiment_table(const Evaluator& evaluator, const TruthTable& truth, const RacingParams& params,
                                  int repetitions, std::string domain = "");

/// Builds the truth by full evaluation first.
ExperimentReport experiment_table(const Evaluator& evaluator, const RacingParams& params, int repetitions,
                                  std::string domain = "");

}  // namespace perfenv
