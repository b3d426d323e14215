#include "perfenv/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "perfenv/envelope.hpp"
#include "perfenv/error.hpp"

namespace perfenv {

TruthTable build_truth(QualityMatrix matrix, double pool_fraction) {
  auto top = top_fraction(matrix, pool_fraction);
  const ConfigId best = top.front();
  return TruthTable{std::move(matrix), pool_fraction, best, std::move(top)};
}

QualityMatrix full_evaluation(const Evaluator& evaluator) {
  const auto& schedule = evaluator.schedule();
  std::vector<PerformanceProfile> profiles(evaluator.size());
  for (std::size_t row = 0; row < evaluator.size(); ++row) {
    auto& p = profiles[row];
    p.config_id = evaluator.config_id(row);
    auto run = evaluator.start(row);
    for (std::size_t k = 0; k < schedule.count(); ++k) p.quality.push_back(run->step());
  }
  return QualityMatrix(schedule, std::move(profiles));
}

void check_compatible(const RacingResult& result, const TruthTable& truth) {
  if (result.config_count != truth.matrix.size()) {
    throw ValidationError("result covers " + std::to_string(result.config_count) + " configurations, truth covers " +
                          std::to_string(truth.matrix.size()));
  }
  if (!(result.schedule == truth.matrix.schedule())) {
    throw ValidationError("result and truth use different checkpoint schedules");
  }
  if (result.final_pool.size() != truth.true_top_set.size()) {
    throw ValidationError("pool size " + std::to_string(result.final_pool.size()) + " differs from truth top set size " +
                          std::to_string(truth.true_top_set.size()));
  }
}

double speedup(const RacingResult& result, const TruthTable& truth) {
  check_compatible(result, truth);
  if (result.total_virtual_cost <= 0) throw ValidationError("racing result has an empty cost ledger");
  return static_cast<double>(result.full_evaluation_cost()) / static_cast<double>(result.total_virtual_cost);
}

bool overlap_top(const RacingResult& result, const TruthTable& truth) {
  check_compatible(result, truth);
  return result.final_pool.contains(truth.true_best);
}

double overlap_fraction(const RacingResult& result, const TruthTable& truth) {
  check_compatible(result, truth);
  std::size_t found = 0;
  for (ConfigId id : truth.true_top_set) {
    if (result.final_pool.contains(id)) ++found;
  }
  return 100.0 * static_cast<double>(found) / static_cast<double>(truth.true_top_set.size());
}

std::string percent_label(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", fraction * 100.0);
  return buf;
}

std::vector<FigureRow> figure_data(const QualityMatrix& matrix, std::span<const double> fractions) {
  if (matrix.empty()) throw ValidationError("figure data of an empty matrix");
  const auto& schedule = matrix.schedule();
  const ConfigId top = top_fraction(matrix, 1.0).front();
  const std::size_t top_row = matrix.index_of(top);

  struct Series {
    std::string label;
    CutoffLine line;
    std::vector<std::size_t> rows;
  };
  std::vector<Series> cutoffs;
  for (double f : fractions) {
    Series s{percent_label(f), exact_cutoff_line(matrix, f), {}};
    for (ConfigId id : top_fraction(matrix, f)) s.rows.push_back(matrix.index_of(id));
    cutoffs.push_back(std::move(s));
  }

  const double n = static_cast<double>(matrix.size());
  std::vector<double> column(matrix.size());
  auto rank_of = [&](double value) {
    auto better = std::lower_bound(column.begin(), column.end(), value) - column.begin();
    return 100.0 * static_cast<double>(better) / n;
  };

  std::vector<FigureRow> rows;
  for (std::size_t k = 0; k < schedule.count(); ++k) {
    for (std::size_t r = 0; r < matrix.size(); ++r) column[r] = matrix.quality(r, k);
    std::sort(column.begin(), column.end());
    const VirtualTime t = schedule.time(k);

    rows.push_back({t, "top_pp", matrix.quality(top_row, k)});
    for (const auto& s : cutoffs) rows.push_back({t, "cutoff_" + s.label, s.line.value[k]});
    rows.push_back({t, "rank_top", rank_of(matrix.quality(top_row, k))});
    for (const auto& s : cutoffs) {
      double worst = 0.0;
      for (std::size_t r : s.rows) worst = std::max(worst, rank_of(matrix.quality(r, k)));
      rows.push_back({t, "rank_cutoff_" + s.label, worst});
    }
  }
  return rows;
}

ExperimentRow summarize(std::string domain, std::size_t configs, std::span<const RepetitionMetrics> runs) {
  ExperimentRow row;
  row.domain = std::move(domain);
  row.configs = configs;
  row.repetitions = static_cast<int>(runs.size());
  if (runs.empty()) return row;
  std::size_t hits = 0;
  for (const auto& r : runs) {
    row.mean_speedup += r.speedup;
    row.mean_overlap_percent += r.overlap_fraction;
    if (r.overlap_top) ++hits;
  }
  const double count = static_cast<double>(runs.size());
  row.mean_speedup /= count;
  row.mean_overlap_percent /= count;
  row.overlap_top_percent = 100.0 * static_cast<double>(hits) / count;
  return row;
}

ExperimentReport experiment_table(const Evaluator& evaluator, const TruthTable& truth, const RacingParams& params,
                                  int repetitions, std::string domain) {
  if (repetitions < 1) throw ValidationError("repetitions must be >= 1");
  if (truth.matrix.size() != evaluator.size()) throw ValidationError("truth table does not match the evaluator");
  ExperimentReport report;
  for (int i = 0; i < repetitions; ++i) {
    RacingParams p = params;
    p.seed = params.seed + static_cast<std::uint64_t>(i);
    RacingResult result = run_racing(evaluator, p);
    report.runs.push_back(RepetitionMetrics{p.seed, speedup(result, truth), overlap_top(result, truth),
                                            overlap_fraction(result, truth), result.total_virtual_cost});
  }
  report.row = summarize(std::move(domain), evaluator.size(), report.runs);
  return report;
}

ExperimentReport experiment_table(const Evaluator& evaluator, const RacingParams& params, int repetitions,
                                  std::string domain) {
  const TruthTable truth = build_truth(full_evaluation(evaluator), params.pool_fraction);
  return experiment_table(evaluator, truth, params, repetitions, std::move(domain));
}

}  // namespace perfenv
