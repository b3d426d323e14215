#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "perfenv/envelope.hpp"
#include "perfenv/error.hpp"
#include "perfenv/io.hpp"
#include "perfenv/metrics.hpp"
#include "perfenv/synthetic.hpp"

using namespace perfenv;

namespace {

RacingResult pool_result(std::vector<ConfigId> ids, std::size_t n, VirtualTime cost) {
  RacingResult r;
  r.config_count = n;
  r.total_virtual_cost = cost;
  r.final_pool = Pool(ids.size());
  for (ConfigId id : ids) r.final_pool.seed({0, {id, std::vector<double>(11, 0.5)}});
  return r;
}

// Reference plot coordinates rebuilt on 26,608 configurations: 267 form the
// 1% set; exactly 2898 are strictly better than its worst member at 32 ms.
QualityMatrix reference_figure_matrix() {
  constexpr std::size_t n = 26608;
  constexpr std::size_t top = 267;
  constexpr std::size_t better_at_32 = 2898;
  std::vector<PerformanceProfile> ps;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> q(11, 1.0);
    double at32, fin;
    if (c == 0) {
      q[0] = 0.528224027675535;
      at32 = 0.01;
      fin = 0.000100898174527227;
    } else if (c < top - 1) {
      at32 = 0.05;
      fin = 0.001 + 1e-7 * static_cast<double>(c);
    } else if (c == top - 1) {
      at32 = 0.204886098440359;
      fin = 0.00177013160892996;
    } else if (c < better_at_32 + 1) {
      at32 = 0.15;
      fin = 0.05;
    } else {
      at32 = 0.5;
      fin = 0.3;
    }
    for (std::size_t k = 1; k < 11; ++k) q[k] = k < 5 ? std::min(1.0, q[0] + 0.4) : (k < 10 ? at32 : fin);
    if (c == 0) q[1] = q[2] = q[3] = q[4] = 0.528224027675535;
    q[0] = std::max(q[0], q[1]);
    ps.push_back({c, q});
  }
  return QualityMatrix(CheckpointSchedule{}, std::move(ps));
}

std::map<std::pair<VirtualTime, std::string>, double> parse_figure(const std::string& csv) {
  std::map<std::pair<VirtualTime, std::string>, double> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    double v = 0;
    std::from_chars(line.data() + b + 1, line.data() + line.size(), v);
    out[{std::stoll(line.substr(0, a)), line.substr(a + 1, b - a - 1)}] = v;
  }
  return out;
}

}  // namespace

TEST_CASE("overlap and speedup") {
  const auto m = fixtures::matrix({{1, .1}, {1, .2}, {1, .3}, {1, .4}, {1, .5}, {1, .6}, {1, .7}, {1, .8}},
                                  CheckpointSchedule(1, 2));
  const auto truth = build_truth(m, 0.5);
  CHECK(truth.true_best == 0);
  CHECK(truth.true_top_set == std::vector<ConfigId>{0, 1, 2, 3});

  auto r = pool_result({0, 1, 2, 4}, 8, 4);
  r.schedule = CheckpointSchedule(1, 2);
  CHECK(overlap_fraction(r, truth) == 75.0);
  CHECK(overlap_top(r, truth));
  CHECK(speedup(r, truth) == 4.0);

  auto miss = pool_result({1, 2, 3, 4}, 8, 16);
  miss.schedule = CheckpointSchedule(1, 2);
  CHECK_FALSE(overlap_top(miss, truth));
  CHECK(speedup(miss, truth) == 1.0);
}

TEST_CASE("incompatible result and truth are rejected") {
  const auto truth = build_truth(fixtures::racing_a(), 0.25);
  auto r = pool_result({1}, 5, 100);
  CHECK_THROWS_AS(check_compatible(r, truth), ValidationError);
  r = pool_result({1}, 4, 100);
  r.schedule = CheckpointSchedule(1, 5);
  CHECK_THROWS_AS(check_compatible(r, truth), ValidationError);
  CHECK_THROWS_AS(speedup(r, truth), ValidationError);
}

TEST_CASE("percent labels") {
  CHECK(percent_label(0.01) == "1");
  CHECK(percent_label(0.05) == "5");
  CHECK(percent_label(0.005) == "0.5");
}

TEST_CASE("figure data carries reference coordinates through the exporter") {
  const auto m = reference_figure_matrix();
  CHECK(top_fraction_size(m.size(), 0.01) == 267);
  const std::vector<double> fractions{0.01};
  const auto rows = figure_data(m, fractions);
  std::ostringstream csv;
  io::write_figure_csv(csv, rows);
  CHECK(csv.str().rfind("time_ms,series,value\n", 0) == 0);
  const auto fig = parse_figure(csv.str());
  CHECK(fig.at({1, "top_pp"}) == 0.528224027675535);
  CHECK(fig.at({1024, "top_pp"}) == 0.000100898174527227);
  CHECK(fig.at({32, "cutoff_1"}) == 0.204886098440359);
  CHECK(fig.at({1024, "cutoff_1"}) == 0.00177013160892996);
  CHECK(fig.at({32, "rank_cutoff_1"}) == doctest::Approx(10.8914612146723).epsilon(1e-13));
  CHECK(fig.at({1024, "rank_top"}) == 0.0);
}

TEST_CASE("figure series invariants on synthetic data") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SyntheticParams sp;
    sp.configs = 500;
    sp.seed = seed;
    const auto m = generate_synthetic(sp);
    const std::vector<double> fractions{0.01, 0.05};
    const auto rows = figure_data(m, fractions);
    std::map<std::string, std::vector<double>> series;
    for (const auto& r : rows) series[r.series].push_back(r.value);
    REQUIRE(series.size() == 6);
    const auto& top = series["top_pp"];
    CHECK(std::is_sorted(top.rbegin(), top.rend()));
    for (std::size_t k = 0; k < 11; ++k) CHECK(series["cutoff_1"][k] <= series["cutoff_5"][k]);
    CHECK(series["rank_top"].back() == 0.0);
    std::ostringstream csv;
    io::write_figure_csv(csv, rows);
    std::istringstream in(csv.str());
    CHECK_NOTHROW(io::validate_figure_csv(in));
  }
}

TEST_CASE("experiment repetitions use consecutive seeds") {
  SyntheticParams sp;
  sp.configs = 200;
  ReplayEvaluator ev(generate_synthetic(sp));
  RacingParams p;
  p.seed = 40;
  p.candidate_order = CandidateOrder::shuffled;
  const auto report = experiment_table(ev, p, 5, "toy");
  REQUIRE(report.runs.size() == 5);
  const auto truth = build_truth(ev.matrix(), p.pool_fraction);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(report.runs[i].seed == 40 + i);
    auto single = p;
    single.seed = 40 + i;
    CHECK(report.runs[i].speedup == speedup(run_racing(ev, single), truth));
  }
  CHECK(report.row.domain == "toy");
  CHECK(report.row.configs == 200);
  CHECK(report.row.repetitions == 5);
}

TEST_CASE("summarize averages repetitions") {
  const std::vector<RepetitionMetrics> runs = {{0, 2.0, true, 100.0, 1}, {1, 4.0, false, 50.0, 1}};
  const auto row = summarize("d", 10, runs);
  CHECK(row.mean_speedup == 3.0);
  CHECK(row.overlap_top_percent == 50.0);
  CHECK(row.mean_overlap_percent == 75.0);
}
