#include "perfenv/splp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "perfenv/error.hpp"
#include "perfenv/rng.hpp"

namespace perfenv {

void SplpInstance::validate() const {
  if (open_cost.empty()) throw ValidationError("SPLP instance '" + name + "' has no facilities");
  if (service_cost.size() != open_cost.size()) {
    throw ValidationError("SPLP instance '" + name + "': service cost rows do not match facility count");
  }
  const std::size_t c = customers();
  if (c == 0) throw ValidationError("SPLP instance '" + name + "' has no customers");
  for (double v : open_cost) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("SPLP instance '" + name + "': bad open cost");
  }
  for (const auto& row : service_cost) {
    if (row.size() != c) throw ValidationError("SPLP instance '" + name + "': ragged service cost matrix");
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("SPLP instance '" + name + "': bad service cost");
    }
  }
}

SplpInstance generate_splp_instance(std::size_t facilities, std::size_t customers, std::uint64_t seed,
                                    const SplpGenerator& ranges) {
  if (facilities == 0 || customers == 0) throw ValidationError("SPLP instance needs facilities and customers");
  Rng rng(derive_seed(seed, 4));
  auto uniform = [&](double lo, double hi) { return std::round(lo + (hi - lo) * rng.uniform01()); };
  SplpInstance inst;
  inst.name = "splp_f" + std::to_string(facilities) + "_c" + std::to_string(customers) + "_s" + std::to_string(seed);
  inst.seed = seed;
  inst.open_cost.resize(facilities);
  for (double& v : inst.open_cost) v = uniform(ranges.open_cost_min, ranges.open_cost_max);
  inst.service_cost.assign(facilities, std::vector<double>(customers));
  for (auto& row : inst.service_cost) {
    for (double& v : row) v = uniform(ranges.service_cost_min, ranges.service_cost_max);
  }
  return inst;
}

double splp_objective(const SplpInstance& instance, std::span<const std::size_t> open_set) {
  if (open_set.empty()) throw ValidationError("SPLP objective of an empty open set");
  double total = 0.0;
  for (std::size_t f : open_set) {
    if (f >= instance.facilities()) throw std::out_of_range("facility index out of range");
    total += instance.open_cost[f];
  }
  for (std::size_t c = 0; c < instance.customers(); ++c) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t f : open_set) best = std::min(best, instance.service_cost[f][c]);
    total += best;
  }
  return total;
}

double splp_brute_force_optimum(const SplpInstance& instance) {
  const std::size_t n = instance.facilities();
  if (n > 24) throw ValidationError("brute force limited to 24 facilities");
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> open;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    open.clear();
    for (std::size_t f = 0; f < n; ++f) {
      if (mask >> f & 1U) open.push_back(f);
    }
    best = std::min(best, splp_objective(instance, open));
  }
  return best;
}

SplpSolution::SplpSolution(const SplpInstance& instance, std::vector<bool> open)
    : instance_(&instance), open_(std::move(open)) {
  if (open_.size() != instance.facilities()) throw ValidationError("open flags do not match facility count");
  rebuild();
  if (open_count_ == 0) throw ValidationError("SPLP solution needs at least one open facility");
}

void SplpSolution::rebuild() {
  const auto& inst = *instance_;
  const std::size_t n_c = inst.customers();
  constexpr double inf = std::numeric_limits<double>::infinity();
  open_count_ = 0;
  objective_ = 0.0;
  nearest_.assign(n_c, 0);
  first_.assign(n_c, inf);
  second_.assign(n_c, inf);
  for (std::size_t f = 0; f < open_.size(); ++f) {
    if (!open_[f]) continue;
    ++open_count_;
    objective_ += inst.open_cost[f];
    const auto& row = inst.service_cost[f];
    for (std::size_t c = 0; c < n_c; ++c) {
      if (row[c] < first_[c]) {
        second_[c] = first_[c];
        first_[c] = row[c];
        nearest_[c] = f;
      } else if (row[c] < second_[c]) {
        second_[c] = row[c];
      }
    }
  }
  for (std::size_t c = 0; c < n_c; ++c) objective_ += first_[c];
}

std::vector<std::size_t> SplpSolution::open_facilities() const {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < open_.size(); ++f) {
    if (open_[f]) out.push_back(f);
  }
  return out;
}

std::vector<std::size_t> SplpSolution::closed_facilities() const {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < open_.size(); ++f) {
    if (!open_[f]) out.push_back(f);
  }
  return out;
}

double SplpSolution::open_delta(std::size_t f) const {
  const auto& row = instance_->service_cost[f];
  double delta = instance_->open_cost[f];
  for (std::size_t c = 0; c < row.size(); ++c) delta += std::min(0.0, row[c] - first_[c]);
  return delta;
}

double SplpSolution::close_delta(std::size_t f) const {
  double delta = -instance_->open_cost[f];
  for (std::size_t c = 0; c < nearest_.size(); ++c) {
    if (nearest_[c] == f) delta += second_[c] - first_[c];
  }
  return delta;
}

double SplpSolution::swap_delta(std::size_t out, std::size_t in) const {
  const auto& row = instance_->service_cost[in];
  double delta = instance_->open_cost[in] - instance_->open_cost[out];
  for (std::size_t c = 0; c < row.size(); ++c) {
    const double without = nearest_[c] == out ? second_[c] : first_[c];
    delta += std::min(row[c], without) - first_[c];
  }
  return delta;
}

void SplpSolution::open(std::size_t f) {
  if (open_[f]) throw std::logic_error("facility already open");
  open_[f] = true;
  rebuild();
}

void SplpSolution::close(std::size_t f) {
  if (!open_[f]) throw std::logic_error("facility already closed");
  if (open_count_ < 2) throw std::logic_error("cannot close the last open facility");
  open_[f] = false;
  rebuild();
}

void SplpSolution::swap(std::size_t out, std::size_t in) {
  if (!open_[out] || open_[in]) throw std::logic_error("swap needs an open and a closed facility");
  open_[out] = false;
  open_[in] = true;
  rebuild();
}

}  // namespace perfenv
