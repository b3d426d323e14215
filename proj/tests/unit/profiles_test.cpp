#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "perfenv/error.hpp"
#include "perfenv/profiles.hpp"
#include "perfenv/rng.hpp"

using namespace perfenv;

TEST_CASE("default schedule doubles from 1 to 1024") {
  CheckpointSchedule s;
  CHECK(s.count() == 11);
  CHECK(s.time(0) == 1);
  CHECK(s.time(5) == 32);
  CHECK(s.full_budget() == 1024);
  CHECK(s.times().size() == 11);
  CHECK(CheckpointSchedule(4, 3).times() == std::vector<VirtualTime>{4, 8, 16});
  CHECK_THROWS_AS(CheckpointSchedule(1, 1), ValidationError);
  CHECK_THROWS_AS(CheckpointSchedule(0, 4), ValidationError);
  CHECK_THROWS_AS(s.time(11), std::out_of_range);
}

namespace {

RawTraceSet normalize_fixture() {
  RawTraceSet raw({0, 1, 2}, {"i0", "i1"}, 3);
  const double traces[3][2][3] = {
      {{10, 8, 5}, {100, 90, 90}},
      {{12, 12, 9}, {80, 60, 40}},
      {{20, 15, 15}, {100, 100, 100}},
  };
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < 3; ++k) raw.at(c, i, k) = traces[c][i][k];
  return raw;
}

}  // namespace

TEST_CASE("normalize scales per instance then averages") {
  const auto m = normalize(normalize_fixture(), CheckpointSchedule(1, 3));
  const std::vector<std::vector<double>> expected = {
      {0.6666666666666666, 0.5166666666666667, 0.4166666666666667},
      {0.5666666666666667, 0.4, 0.13333333333333333},
      {1.0, 0.8333333333333333, 0.8333333333333333},
  };
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < 3; ++k) CHECK(m.quality(c, k) == doctest::Approx(expected[c][k]).epsilon(1e-12));
}

TEST_CASE("normalize edge cases") {
  SUBCASE("degenerate instance scales to zero") {
    RawTraceSet raw({0, 1}, {"flat"}, 2);
    for (std::size_t c = 0; c < 2; ++c) raw.at(c, 0, 0) = raw.at(c, 0, 1) = 7.0;
    const auto m = normalize(raw, CheckpointSchedule(1, 2));
    CHECK(m.quality(0, 0) == 0.0);
    CHECK(m.quality(1, 1) == 0.0);
  }
  SUBCASE("non-monotone trace is rejected with its config and instance") {
    RawTraceSet raw({5}, {"bad"}, 2);
    raw.at(0, 0, 0) = 1.0;
    raw.at(0, 0, 1) = 2.0;
    try {
      normalize(raw, CheckpointSchedule(1, 2));
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      CHECK(what.find('5') != std::string::npos);
      CHECK(what.find("bad") != std::string::npos);
    }
  }
  SUBCASE("schedule mismatch") {
    CHECK_THROWS_AS(normalize(normalize_fixture(), CheckpointSchedule(1, 4)), ValidationError);
  }
  SUBCASE("final checkpoint reference clamps early values") {
    const auto m = normalize(normalize_fixture(), CheckpointSchedule(1, 3),
                             {NormalizationReference::final_checkpoint});
    for (const auto& p : m.profiles()) {
      for (double q : p.quality) CHECK((q >= 0.0 && q <= 1.0));
    }
    CHECK(m.quality(2, 0) == 1.0);
  }
}

TEST_CASE("normalized matrices are monotone and hit 0 and 1 per instance") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(20);
    std::vector<ConfigId> ids(n);
    for (std::size_t c = 0; c < n; ++c) ids[c] = c;
    RawTraceSet raw(ids, {"a", "b", "c"}, 6);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t i = 0; i < 3; ++i) {
        double v = 1000.0 * rng.uniform01() + 500.0;
        for (std::size_t k = 0; k < 6; ++k) {
          v -= 100.0 * rng.uniform01();
          raw.at(c, i, k) = v;
        }
      }
    const auto m = normalize(raw, CheckpointSchedule(1, 6));
    for (const auto& p : m.profiles()) {
      CHECK(std::is_sorted(p.quality.rbegin(), p.quality.rend()));
      for (double q : p.quality) CHECK((q >= 0.0 && q <= 1.0));
    }
    // one instance alone: extremes are exactly 0 and 1
    RawTraceSet single(ids, {"a"}, 6);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t k = 0; k < 6; ++k) single.at(c, 0, k) = raw.at(c, 0, k);
    const auto s = normalize(single, CheckpointSchedule(1, 6));
    double lo = 1.0, hi = 0.0;
    for (const auto& p : s.profiles())
      for (double q : p.quality) {
        lo = std::min(lo, q);
        hi = std::max(hi, q);
      }
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
  }
}

TEST_CASE("quality matrix validation") {
  CHECK_THROWS_AS(fixtures::matrix({{0.5, 0.6}}, CheckpointSchedule(1, 2)), ValidationError);
  CHECK_THROWS_AS(fixtures::matrix({{0.5, -0.1}}, CheckpointSchedule(1, 2)), ValidationError);
  CHECK_THROWS_AS(fixtures::matrix({{0.5, 0.4, 0.3}}, CheckpointSchedule(1, 2)), ValidationError);
  CHECK_THROWS_AS(QualityMatrix(CheckpointSchedule(1, 2), {{3, {1, 0}}, {3, {1, 0}}}), ValidationError);

  QualityMatrix m(CheckpointSchedule(1, 2), {{9, {1, 0.5}}, {2, {1, 0.2}}});
  CHECK(m[0].config_id == 2);
  CHECK(m.index_of(9) == 1);
  CHECK(m.contains(2));
  CHECK_FALSE(m.contains(3));
  CHECK_THROWS_AS(m.index_of(3), std::out_of_range);
}

TEST_CASE("enforce_monotone is a running minimum") {
  const auto p = enforce_monotone({0, {0.9, 0.5, 0.7, 0.4, 0.6}});
  CHECK(p.quality == std::vector<double>{0.9, 0.5, 0.5, 0.4, 0.4});
}

TEST_CASE("rank percentile") {
  const auto m = fixtures::matrix({{1, 0.1}, {1, 0.2}, {1, 0.3}, {1, 0.4}}, CheckpointSchedule(1, 2));
  CHECK(rank_percentile(m, 0, 1) == 0.0);
  CHECK(rank_percentile(m, 1, 1) == 25.0);
  CHECK(rank_percentile(m, 2, 1) == 50.0);
  CHECK(rank_percentile(m, 3, 1) == 75.0);
  CHECK(rank_percentile(m, 3, 0) == 0.0);
  CHECK(final_quality(m[2]) == 0.3);
}
