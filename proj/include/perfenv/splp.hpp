#pragma once

// Simple Plant Location Problem: open a non-empty subset of facilities so
// that the opening costs plus each customer's cheapest service cost from an
// open facility is minimal.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace perfenv {

struct SplpInstance {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<double> open_cost;                  // [facility]
  std::vector<std::vector<double>> service_cost;  // [facility][customer]

  std::size_t facilities() const noexcept { return open_cost.size(); }
  std::size_t customers() const noexcept { return service_cost.empty() ? 0 : service_cost.front().size(); }

  /// Throws ValidationError unless dense, non-negative and non-empty.
  void validate() const;
};

/// Uniform cost ranges used by `generate_splp_instance`. Service costs are
/// drawn independently per (facility, customer) pair; this non-metric class
/// has many local optima for single-facility moves.
struct SplpGenerator {
  double open_cost_min = 2000.0;
  double open_cost_max = 4000.0;
  double service_cost_min = 0.0;
  double service_cost_max = 1000.0;
};

SplpInstance generate_splp_instance(std::size_t facilities, std::size_t customers, std::uint64_t seed,
                                    const SplpGenerator& ranges = {});

/// Total cost of opening `open_set` (facility indices, non-empty).
double splp_objective(const SplpInstance& instance, std::span<const std::size_t> open_set);

/// Exhaustive optimum over all 2^F - 1 non-empty subsets (small F only).
double splp_brute_force_optimum(const SplpInstance& instance);

/// Incrementally maintained SPLP solution: the open flags plus, per customer,
/// the cheapest and second-cheapest open facility.
class SplpSolution {
 public:
  SplpSolution(const SplpInstance& instance, std::vector<bool> open);

  const SplpInstance& instance() const noexcept { return *instance_; }
  double objective() const noexcept { return objective_; }
  bool is_open(std::size_t f) const { return open_[f]; }
  std::size_t open_count() const noexcept { return open_count_; }
  std::vector<std::size_t> open_facilities() const;
  std::vector<std::size_t> closed_facilities() const;

  /// Objective change of opening a closed facility.
  double open_delta(std::size_t f) const;
  /// Objective change of closing an open facility (requires >= 2 open).
  double close_delta(std::size_t f) const;
  /// Objective change of closing `out` and opening `in`.
  double swap_delta(std::size_t out, std::size_t in) const;

  void open(std::size_t f);
  void close(std::size_t f);
  void swap(std::size_t out, std::size_t in);

 private:
  void rebuild();

  const SplpInstance* instance_;
  std::vector<bool> open_;
  std::size_t open_count_ = 0;
  std::vector<std::size_t> nearest_;
  std::vector<double> first_;
  std::vector<double> second_;
  double objective_ = 0.0;
};

}  // namespace perfenv
