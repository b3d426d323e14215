#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "perfenv/envelope.hpp"
#include "perfenv/error.hpp"
#include "perfenv/rng.hpp"
#include "perfenv/synthetic.hpp"

using namespace perfenv;

TEST_CASE("envelope is the pointwise maximum") {
  const std::vector<PerformanceProfile> ps = {{0, {.5, .2, 0}}, {1, {.4, .3, .1}}};
  CHECK(worst_case_envelope(ps).value == std::vector<double>{.5, .3, .1});
  CHECK(worst_case_envelope(std::span<const PerformanceProfile>(ps.data(), 1)).value == ps[0].quality);
  CHECK_THROWS_AS(worst_case_envelope(std::span<const PerformanceProfile>()), ValidationError);
}

TEST_CASE("envelope dominates members and grows with the set") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    SyntheticParams sp;
    sp.configs = 20;
    sp.seed = rng.next_u64();
    const auto m = generate_synthetic(sp);
    std::vector<PerformanceProfile> subset;
    CutoffLine previous;
    for (const auto& p : m.profiles()) {
      subset.push_back(p);
      const auto line = worst_case_envelope(subset);
      for (const auto& s : subset)
        for (std::size_t k = 0; k < line.value.size(); ++k) CHECK(s.quality[k] <= line.value[k]);
      if (!previous.value.empty())
        for (std::size_t k = 0; k < line.value.size(); ++k) CHECK(previous.value[k] <= line.value[k]);
      CHECK(std::is_sorted(line.value.rbegin(), line.value.rend()));
      previous = line;
    }
  }
}

TEST_CASE("top_fraction size uses the ceiling rule") {
  CHECK(top_fraction_size(26608, 0.01) == 267);
  CHECK(top_fraction_size(100, 0.07) == 7);  // 0.07 * 100 is 7.000000000000001 in binary
  CHECK(top_fraction_size(100, 0.01) == 1);
  CHECK(top_fraction_size(5, 0.01) == 1);
  CHECK(top_fraction_size(4, 1.0) == 4);
  CHECK_THROWS_AS(top_fraction_size(4, 0.0), ValidationError);
  CHECK_THROWS_AS(top_fraction_size(4, 1.5), ValidationError);
}

TEST_CASE("top_fraction orders by final quality then id") {
  const auto m = fixtures::matrix({{1, .3}, {1, .1}, {1, .1}, {1, .5}}, CheckpointSchedule(1, 2));
  CHECK(top_fraction(m, 0.5) == std::vector<ConfigId>{1, 2});
  CHECK(top_fraction(m, 1.0) == std::vector<ConfigId>{1, 2, 0, 3});
  CHECK(exact_cutoff_line(m, 0.5).value == std::vector<double>{1, .1});
}

TEST_CASE("margin policy parsing and thresholds") {
  CHECK(MarginPolicy::parse("x1.2") == MarginPolicy::multiplicative(1.2));
  CHECK(MarginPolicy::parse("+0.2") == MarginPolicy::additive(0.2));
  CHECK(MarginPolicy::parse("off") == MarginPolicy::disabled());
  CHECK(MarginPolicy::parse(MarginPolicy::multiplicative(1.2).to_string()) == MarginPolicy::multiplicative(1.2));
  CHECK(MarginPolicy::parse(MarginPolicy::additive(0.05).to_string()) == MarginPolicy::additive(0.05));
  for (const char* bad : {"", "x", "1.2", "x0.5", "+-1", "xabc", "x1.2z", "on"}) {
    CHECK_THROWS_AS(MarginPolicy::parse(bad), ValidationError);
  }
  CHECK(MarginPolicy::multiplicative(1.2).threshold(0.5) == doctest::Approx(0.6));
  CHECK(MarginPolicy::additive(0.2, 0.01).threshold(0.5) == doctest::Approx(0.71));
}

TEST_CASE("violation is strict at the exact 1.2x boundary") {
  const CutoffLine cutoff{{0.5, 0.5, 0.5}};
  const auto x12 = MarginPolicy::multiplicative(1.2);
  const std::vector<double> at{0.6, 0.6, 0.6};
  const std::vector<double> above{0.6000001, 0.6, 0.6};
  CHECK_FALSE(violates(at, cutoff, x12, 0));
  CHECK(violates(above, cutoff, x12, 0));
  CHECK_FALSE(violates(above, cutoff, MarginPolicy::disabled(), 0));
  // the final checkpoint is not a termination point
  CHECK_THROWS_AS(violates(above, cutoff, x12, 2), std::out_of_range);
  // zero cutoff with no floor: any positive quality violates
  CHECK(violates(std::vector<double>{1e-12, 0, 0}, CutoffLine{{0, 0, 0}}, x12, 0));
  CHECK_FALSE(violates(std::vector<double>{1e-12, 0, 0}, CutoffLine{{0, 0, 0}}, MarginPolicy::multiplicative(1.2, 1e-9), 0));
}

TEST_CASE("violation is monotone in quality") {
  Rng rng(5);
  const auto policy = MarginPolicy::multiplicative(1.2);
  for (int i = 0; i < 1000; ++i) {
    const double c = rng.uniform01();
    const double a = rng.uniform01();
    const double b = a + rng.uniform01() * (1.0 - a);
    const CutoffLine line{{c, c}};
    if (violates(std::vector<double>{a, 0}, line, policy, 0)) CHECK(violates(std::vector<double>{b, 0}, line, policy, 0));
  }
}
