#pragma once

// Racing with early termination against a learned cutoff line.
//
//   1. Seed a pool with ceil(pool_fraction * N) random configurations, run
//      them to the full budget and take their worst-case envelope as the
//      cutoff line.
//   2. Race every other configuration checkpoint by checkpoint. A run whose
//      quality exceeds the cutoff by more than the margin at any checkpoint
//      before the last is terminated. A survivor joins the pool, the pool
//      member with the worst final quality leaves and the cutoff is rebuilt
//      from the pool.
//   3. Repeat step 2 over the configurations terminated in the first pass.
//   4. The pool approximates the top pool_fraction of all configurations.
//
// All costs are virtual checkpoint times.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perfenv/envelope.hpp"
#include "perfenv/evaluator.hpp"
#include "perfenv/profiles.hpp"
#include "perfenv/rng.hpp"

namespace perfenv {

enum class CandidateOrder { id_order, shuffled };

struct RacingParams {
  double pool_fraction = 0.01;
  MarginPolicy margin = MarginPolicy::multiplicative(1.2);
  std::uint64_t seed = 0;
  CandidateOrder candidate_order = CandidateOrder::id_order;
  int passes = 2;
  /// Overrides the random pool draw when set (ids must exist and be distinct;
  /// the count defines the pool capacity).
  std::optional<std::vector<ConfigId>> seed_configs;
  bool record_cutoff_history = false;

  void validate() const;
};

struct PoolMember {
  std::size_t row = 0;
  PerformanceProfile profile;

  ConfigId id() const noexcept { return profile.config_id; }
  double final() const { return final_quality(profile); }
};

/// Fixed-capacity set of fully evaluated configurations.
class Pool {
 public:
  explicit Pool(std::size_t capacity = 0) : capacity_(capacity) {}

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<PoolMember>& members() const noexcept { return members_; }

  /// Adds a member while seeding (size must stay <= capacity).
  void seed(PoolMember member);

  /// Inserts a survivor and evicts the worst member by final quality (ties:
  /// the larger id leaves). Returns the evicted id, which may be the newcomer.
  ConfigId insert_and_evict(PoolMember member);

  /// Envelope over the current members, recomputed from scratch.
  CutoffLine cutoff() const;

  /// Member ids ordered by (final quality, id).
  std::vector<ConfigId> ranked_ids() const;

  bool contains(ConfigId id) const;
  double worst_final() const;

 private:
  std::size_t capacity_;
  std::vector<PoolMember> members_;
};

enum class RunStatus { completed, terminated };

struct RunOutcome {
  ConfigId config_id = 0;
  /// 1 for seeding and the first pass, 2 for the second pass, ...
  int pass_index = 1;
  bool seed = false;
  RunStatus status = RunStatus::completed;
  std::size_t stop_checkpoint = 0;
  VirtualTime virtual_cost = 0;

  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

struct CutoffEvent {
  /// "seed" or "pass<p>:insert <id> evict <id>"
  std::string event;
  CutoffLine line;
};

struct RacingResult {
  Pool final_pool;
  std::vector<RunOutcome> outcomes;
  VirtualTime total_virtual_cost = 0;
  RacingParams params;
  std::size_t config_count = 0;
  CheckpointSchedule schedule;
  std::vector<CutoffEvent> cutoff_history;

  /// Total cost of evaluating every configuration to the full budget.
  VirtualTime full_evaluation_cost() const {
    return static_cast<VirtualTime>(config_count) * schedule.full_budget();
  }
};

/// Thrown when an evaluator fails mid-race; carries the ledger so far.
class RacingAborted : public std::runtime_error {
 public:
  RacingAborted(const std::string& what, RacingResult partial, std::exception_ptr cause)
      : std::runtime_error(what), partial_(std::move(partial)), cause_(std::move(cause)) {}

  const RacingResult& partial() const noexcept { return partial_; }
  std::exception_ptr cause() const noexcept { return cause_; }

 private:
  RacingResult partial_;
  std::exception_ptr cause_;
};

struct SeedOutcome {
  Pool pool;
  CutoffLine cutoff;
  std::vector<RunOutcome> outcomes;
};

struct PassOutcome {
  Pool pool;
  CutoffLine cutoff;
  std::vector<RunOutcome> outcomes;
  /// Rows terminated in this pass, in race order.
  std::vector<std::size_t> terminated;
  std::vector<CutoffEvent> cutoff_history;
};

/// Step 1. Draws the pool from `rng` unless params.seed_configs is set.
SeedOutcome seed_pool(const Evaluator& evaluator, const RacingParams& params, Rng& rng);

/// Step 2 over `candidates` (evaluator rows) in the given order.
PassOutcome race_pass(std::span<const std::size_t> candidates, Pool pool, CutoffLine cutoff,
                      const Evaluator& evaluator, const RacingParams& params, int pass_index);

/// Steps 1-4.
RacingResult run_racing(const Evaluator& evaluator, const RacingParams& params);

}  // namespace perfenv
