#include "perfenv/racing.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "perfenv/error.hpp"

namespace perfenv {

void RacingParams::validate() const {
  if (!(pool_fraction > 0.0 && pool_fraction <= 1.0)) throw ValidationError("pool fraction must be in (0,1]");
  if (passes < 1) throw ValidationError("passes must be >= 1");
  if (seed_configs && seed_configs->empty()) throw ValidationError("explicit seed pool is empty");
}

void Pool::seed(PoolMember member) {
  if (members_.size() >= capacity_) throw std::logic_error("pool already at capacity");
  members_.push_back(std::move(member));
}

ConfigId Pool::insert_and_evict(PoolMember member) {
  members_.push_back(std::move(member));
  auto worst = std::max_element(members_.begin(), members_.end(), [](const PoolMember& a, const PoolMember& b) {
    const double fa = a.final();
    const double fb = b.final();
    return fa != fb ? fa < fb : a.id() < b.id();
  });
  const ConfigId evicted = worst->id();
  members_.erase(worst);
  return evicted;
}

CutoffLine Pool::cutoff() const {
  std::vector<const PerformanceProfile*> refs;
  refs.reserve(members_.size());
  for (const auto& m : members_) refs.push_back(&m.profile);
  return worst_case_envelope(std::span<const PerformanceProfile* const>(refs));
}

std::vector<ConfigId> Pool::ranked_ids() const {
  std::vector<const PoolMember*> sorted;
  for (const auto& m : members_) sorted.push_back(&m);
  std::sort(sorted.begin(), sorted.end(), [](const PoolMember* a, const PoolMember* b) {
    const double fa = a->final();
    const double fb = b->final();
    return fa != fb ? fa < fb : a->id() < b->id();
  });
  std::vector<ConfigId> ids;
  for (const auto* m : sorted) ids.push_back(m->id());
  return ids;
}

bool Pool::contains(ConfigId id) const {
  return std::any_of(members_.begin(), members_.end(), [id](const PoolMember& m) { return m.id() == id; });
}

double Pool::worst_final() const {
  double worst = 0.0;
  for (const auto& m : members_) worst = std::max(worst, m.final());
  return worst;
}

namespace {

struct Attempt {
  PerformanceProfile profile;
  RunOutcome outcome;
};

// Runs one configuration from scratch. With `cutoff` null the run always
// goes to the full budget (seeding).
Attempt attempt(const Evaluator& evaluator, std::size_t row, const CutoffLine* cutoff, const MarginPolicy& margin,
                int pass_index, bool seed) {
  const auto& schedule = evaluator.schedule();
  const std::size_t last = schedule.final_index();
  const ConfigId id = evaluator.config_id(row);
  Attempt a;
  a.profile.config_id = id;
  a.profile.quality.reserve(schedule.count());
  a.outcome = RunOutcome{id, pass_index, seed, RunStatus::completed, last, schedule.full_budget()};
  try {
    auto run = evaluator.start(row);
    for (std::size_t k = 0; k <= last; ++k) {
      const double q = run->step();
      if (!(q >= 0.0 && q <= 1.0)) throw EvaluationError(id, "quality outside [0,1]");
      if (k > 0 && q > a.profile.quality.back()) throw EvaluationError(id, "non-monotone run");
      a.profile.quality.push_back(q);
      if (cutoff != nullptr && k < last && violates(a.profile.quality, *cutoff, margin, k)) {
        a.outcome.status = RunStatus::terminated;
        a.outcome.stop_checkpoint = k;
        a.outcome.virtual_cost = schedule.time(k);
        break;
      }
    }
  } catch (const EvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationError(id, e.what());
  }
  return a;
}

std::string insert_event(int pass_index, ConfigId inserted, ConfigId evicted) {
  return "pass" + std::to_string(pass_index) + ":insert " + std::to_string(inserted) + " evict " +
         std::to_string(evicted);
}

// Shared by the public step functions and run_racing. Appends to `sink` as
// it goes so an abort can report everything paid so far.
struct Ledger {
  std::vector<RunOutcome> outcomes;
  std::vector<CutoffEvent> history;
};

SeedOutcome seed_into(const Evaluator& evaluator, const RacingParams& params, Rng& rng, Ledger& ledger) {
  params.validate();
  const std::size_t n = evaluator.size();
  if (n == 0) throw ValidationError("evaluator exposes no configurations");

  std::vector<std::size_t> rows;
  if (params.seed_configs) {
    std::set<ConfigId> wanted(params.seed_configs->begin(), params.seed_configs->end());
    if (wanted.size() != params.seed_configs->size()) throw ValidationError("duplicate id in explicit seed pool");
    for (ConfigId id : *params.seed_configs) {
      std::size_t row = 0;
      while (row < n && evaluator.config_id(row) != id) ++row;
      if (row == n) throw ValidationError("explicit seed pool names unknown configuration " + std::to_string(id));
      rows.push_back(row);
    }
  } else {
    // partial Fisher-Yates: the first `capacity` slots are a uniform sample
    const std::size_t capacity = top_fraction_size(n, params.pool_fraction);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t i = 0; i < capacity; ++i) {
      std::swap(all[i], all[i + rng.below(n - i)]);
    }
    rows.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(capacity));
  }

  SeedOutcome out{Pool(rows.size()), {}, {}};
  for (std::size_t row : rows) {
    Attempt a = attempt(evaluator, row, nullptr, params.margin, 1, true);
    ledger.outcomes.push_back(a.outcome);
    out.outcomes.push_back(a.outcome);
    out.pool.seed(PoolMember{row, std::move(a.profile)});
  }
  out.cutoff = out.pool.cutoff();
  if (params.record_cutoff_history) ledger.history.push_back({"seed", out.cutoff});
  return out;
}

PassOutcome pass_into(std::span<const std::size_t> candidates, Pool pool, CutoffLine cutoff,
                      const Evaluator& evaluator, const RacingParams& params, int pass_index, Ledger& ledger) {
  if (cutoff.value.size() != evaluator.schedule().count()) {
    throw ValidationError("cutoff line length does not match the evaluator schedule");
  }
  PassOutcome out;
  const std::size_t history_start = ledger.history.size();
  for (std::size_t row : candidates) {
    Attempt a = attempt(evaluator, row, &cutoff, params.margin, pass_index, false);
    ledger.outcomes.push_back(a.outcome);
    out.outcomes.push_back(a.outcome);
    if (a.outcome.status == RunStatus::terminated) {
      out.terminated.push_back(row);
      continue;
    }
    const ConfigId inserted = a.profile.config_id;
    const ConfigId evicted = pool.insert_and_evict(PoolMember{row, std::move(a.profile)});
    cutoff = pool.cutoff();
    if (params.record_cutoff_history) {
      ledger.history.push_back({insert_event(pass_index, inserted, evicted), cutoff});
    }
  }
  out.cutoff_history.assign(ledger.history.begin() + static_cast<std::ptrdiff_t>(history_start),
                            ledger.history.end());
  out.pool = std::move(pool);
  out.cutoff = std::move(cutoff);
  return out;
}

}  // namespace

SeedOutcome seed_pool(const Evaluator& evaluator, const RacingParams& params, Rng& rng) {
  Ledger ledger;
  return seed_into(evaluator, params, rng, ledger);
}

PassOutcome race_pass(std::span<const std::size_t> candidates, Pool pool, CutoffLine cutoff,
                      const Evaluator& evaluator, const RacingParams& params, int pass_index) {
  Ledger ledger;
  return pass_into(candidates, std::move(pool), std::move(cutoff), evaluator, params, pass_index, ledger);
}

RacingResult run_racing(const Evaluator& evaluator, const RacingParams& params) {
  params.validate();
  RacingResult result;
  result.params = params;
  result.config_count = evaluator.size();
  result.schedule = evaluator.schedule();

  Ledger ledger;
  auto finish = [&](Pool pool) {
    result.final_pool = std::move(pool);
    result.outcomes = std::move(ledger.outcomes);
    result.cutoff_history = std::move(ledger.history);
    result.total_virtual_cost = 0;
    for (const auto& o : result.outcomes) result.total_virtual_cost += o.virtual_cost;
  };

  Pool pool;
  try {
    Rng seed_rng(derive_seed(params.seed, 1));
    SeedOutcome seeded = seed_into(evaluator, params, seed_rng, ledger);
    pool = seeded.pool;
    CutoffLine cutoff = std::move(seeded.cutoff);

    std::vector<std::size_t> candidates;
    for (std::size_t row = 0; row < evaluator.size(); ++row) {
      if (!pool.contains(evaluator.config_id(row))) candidates.push_back(row);
    }
    if (params.candidate_order == CandidateOrder::shuffled) {
      Rng order_rng(derive_seed(params.seed, 2));
      order_rng.shuffle(std::span<std::size_t>(candidates));
    }

    for (int pass = 1; pass <= params.passes && !candidates.empty(); ++pass) {
      PassOutcome passed = pass_into(candidates, std::move(pool), std::move(cutoff), evaluator, params, pass, ledger);
      pool = std::move(passed.pool);
      cutoff = std::move(passed.cutoff);
      candidates = std::move(passed.terminated);
    }
  } catch (const EvaluationError& e) {
    finish(std::move(pool));
    throw RacingAborted(e.what(), std::move(result), std::current_exception());
  }
  finish(std::move(pool));
  return result;
}

}  // namespace perfenv
