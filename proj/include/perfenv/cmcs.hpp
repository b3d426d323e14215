#pragma once

// CMCS-lite: a three-slot deterministic control machine over a fixed library
// of SPLP components. The machine starts in slot 0, applies the slot's
// component to the current solution and moves to succ_improve[slot] if the
// objective strictly improved, otherwise to succ_fail[slot]. One component
// application costs one virtual tick.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "perfenv/evaluator.hpp"
#include "perfenv/profiles.hpp"
#include "perfenv/rng.hpp"
#include "perfenv/splp.hpp"

namespace perfenv {

enum class Component : std::uint8_t {
  first_improvement_open,   // open the first closed facility that improves
  first_improvement_close,  // close the first open facility that improves
  best_improvement_swap,    // apply the best improving (close, open) pair
  random_open,              // open a random closed facility
  random_close,             // close a random open facility (keeps one open)
  random_multi_swap,        // three random (close, open) swaps
};

inline constexpr std::size_t kDefaultLibrarySize = 6;
inline constexpr std::size_t kMultiSwapMoves = 3;

std::string_view component_name(Component c);

/// Applies one component to `solution`. Returns true iff the objective
/// strictly improved.
bool apply_component(Component component, SplpSolution& solution, Rng& rng);

struct CmcsConfiguration {
  std::array<Component, 3> components{};
  std::array<std::uint8_t, 3> succ_improve{};
  std::array<std::uint8_t, 3> succ_fail{};

  /// Every slot reachable from slot 0 through the transition graph.
  bool all_slots_reachable() const;
  /// The same machine with slots 1 and 2 renamed.
  CmcsConfiguration relabeled() const;
  /// Lexicographically minimal of itself and its relabeling.
  CmcsConfiguration canonical() const;
  bool is_canonical() const { return canonical() == *this; }

  /// Stable integer encoding (base-6 components, base-3 transitions).
  std::uint64_t code() const;
  std::string to_string() const;

  friend bool operator==(const CmcsConfiguration&, const CmcsConfiguration&) = default;
  friend auto operator<=>(const CmcsConfiguration&, const CmcsConfiguration&) = default;
};

/// All reachable, canonical configurations over the first `library_size`
/// components, in lexicographic order. Throws on an empty library.
std::vector<CmcsConfiguration> enumerate_cmcs_configurations(std::size_t library_size = kDefaultLibrarySize);

/// Starting solution shared by every configuration on an instance: each
/// facility open with probability 1/2 (at least one open), drawn from the
/// instance seed.
std::vector<bool> initial_open_set(const SplpInstance& instance);

/// Runs the control machine for schedule.full_budget() ticks and records the
/// best-so-far objective at each checkpoint tick.
std::vector<double> cmcs_trace(const SplpInstance& instance, const CmcsConfiguration& config,
                               const CheckpointSchedule& schedule, std::uint64_t run_seed);

/// Seed for the random components of one (configuration, instance) run.
std::uint64_t cmcs_run_seed(std::uint64_t base_seed, std::size_t instance_index, const CmcsConfiguration& config);

struct CmcsEntry {
  ConfigId id = 0;
  CmcsConfiguration config;
};

/// Traces every configuration on every instance, normalizes the traces and
/// replays the resulting quality matrix.
class CmcsEvaluator final : public Evaluator {
 public:
  CmcsEvaluator(std::vector<SplpInstance> instances, std::vector<CmcsEntry> configs, CheckpointSchedule schedule,
                std::uint64_t seed);

  std::size_t size() const override { return replay_->size(); }
  ConfigId config_id(std::size_t row) const override { return replay_->config_id(row); }
  const CheckpointSchedule& schedule() const override { return replay_->schedule(); }
  std::unique_ptr<Run> start(std::size_t row) const override { return replay_->start(row); }

  const RawTraceSet& raw() const noexcept { return *raw_; }
  const QualityMatrix& matrix() const noexcept { return replay_->matrix(); }

 private:
  std::unique_ptr<RawTraceSet> raw_;
  std::unique_ptr<ReplayEvaluator> replay_;
};

/// Enumerates the library and keeps a deterministic random subset of
/// `max_configs` entries (all of them when 0 or larger than the space), in
/// enumeration order. Entry ids are enumeration indices.
std::vector<CmcsEntry> sample_cmcs_entries(std::size_t library_size, std::size_t max_configs, std::uint64_t seed);

/// `count` instances with seeds derived from `seed`, as written by `splp gen`.
std::vector<SplpInstance> generate_splp_instances(std::size_t facilities, std::size_t customers, std::size_t count,
                                                  std::uint64_t seed);

RawTraceSet cmcs_raw_traces(const std::vector<SplpInstance>& instances, const std::vector<CmcsEntry>& configs,
                            const CheckpointSchedule& schedule, std::uint64_t seed);

}  // namespace perfenv
