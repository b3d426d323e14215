#include "perfenv/cmcs.hpp"

#include <algorithm>
#include <limits>

#include "perfenv/error.hpp"

namespace perfenv {

std::string_view component_name(Component c) {
  switch (c) {
    case Component::first_improvement_open:
      return "fi_open";
    case Component::first_improvement_close:
      return "fi_close";
    case Component::best_improvement_swap:
      return "bi_swap";
    case Component::random_open:
      return "rand_open";
    case Component::random_close:
      return "rand_close";
    case Component::random_multi_swap:
      return "rand_multi_swap";
  }
  return "?";
}

namespace {

bool first_improvement_open(SplpSolution& s) {
  for (std::size_t f : s.closed_facilities()) {
    if (s.open_delta(f) < 0.0) {
      s.open(f);
      return true;
    }
  }
  return false;
}

bool first_improvement_close(SplpSolution& s) {
  if (s.open_count() < 2) return false;
  for (std::size_t f : s.open_facilities()) {
    if (s.close_delta(f) < 0.0) {
      s.close(f);
      return true;
    }
  }
  return false;
}

bool best_improvement_swap(SplpSolution& s) {
  double best = 0.0;
  std::size_t best_out = 0;
  std::size_t best_in = 0;
  const auto closed = s.closed_facilities();
  for (std::size_t out : s.open_facilities()) {
    for (std::size_t in : closed) {
      const double d = s.swap_delta(out, in);
      if (d < best) {
        best = d;
        best_out = out;
        best_in = in;
      }
    }
  }
  if (best < 0.0) {
    s.swap(best_out, best_in);
    return true;
  }
  return false;
}

void random_swap(SplpSolution& s, Rng& rng) {
  const auto open = s.open_facilities();
  const auto closed = s.closed_facilities();
  if (open.empty() || closed.empty()) return;
  const std::size_t out = open[rng.below(open.size())];
  const std::size_t in = closed[rng.below(closed.size())];
  s.swap(out, in);
}

}  // namespace

bool apply_component(Component component, SplpSolution& solution, Rng& rng) {
  const double before = solution.objective();
  switch (component) {
    case Component::first_improvement_open:
      first_improvement_open(solution);
      break;
    case Component::first_improvement_close:
      first_improvement_close(solution);
      break;
    case Component::best_improvement_swap:
      best_improvement_swap(solution);
      break;
    case Component::random_open: {
      const auto closed = solution.closed_facilities();
      if (!closed.empty()) solution.open(closed[rng.below(closed.size())]);
      break;
    }
    case Component::random_close: {
      if (solution.open_count() >= 2) {
        const auto open = solution.open_facilities();
        solution.close(open[rng.below(open.size())]);
      }
      break;
    }
    case Component::random_multi_swap:
      for (std::size_t i = 0; i < kMultiSwapMoves; ++i) random_swap(solution, rng);
      break;
  }
  return solution.objective() < before;
}

bool CmcsConfiguration::all_slots_reachable() const {
  bool seen[3] = {true, false, false};
  std::uint8_t stack[3] = {0};
  int top = 1;
  while (top > 0) {
    const std::uint8_t s = stack[--top];
    for (std::uint8_t t : {succ_improve[s], succ_fail[s]}) {
      if (!seen[t]) {
        seen[t] = true;
        stack[top++] = t;
      }
    }
  }
  return seen[1] && seen[2];
}

CmcsConfiguration CmcsConfiguration::relabeled() const {
  constexpr std::uint8_t perm[3] = {0, 2, 1};
  CmcsConfiguration out;
  for (std::size_t j = 0; j < 3; ++j) {
    out.components[perm[j]] = components[j];
    out.succ_improve[perm[j]] = perm[succ_improve[j]];
    out.succ_fail[perm[j]] = perm[succ_fail[j]];
  }
  return out;
}

CmcsConfiguration CmcsConfiguration::canonical() const { return std::min(*this, relabeled()); }

std::uint64_t CmcsConfiguration::code() const {
  std::uint64_t v = 0;
  for (Component c : components) v = v * 6 + static_cast<std::uint64_t>(c);
  for (std::uint8_t t : succ_improve) v = v * 3 + t;
  for (std::uint8_t t : succ_fail) v = v * 3 + t;
  return v;
}

std::string CmcsConfiguration::to_string() const {
  std::string out;
  for (std::size_t s = 0; s < 3; ++s) {
    if (s > 0) out += ' ';
    out += std::to_string(s) + ':' + std::string(component_name(components[s])) + "->" +
           std::to_string(succ_improve[s]) + '/' + std::to_string(succ_fail[s]);
  }
  return out;
}

std::vector<CmcsConfiguration> enumerate_cmcs_configurations(std::size_t library_size) {
  if (library_size < 1) throw ValidationError("component library must have at least 1 component");
  if (library_size > kDefaultLibrarySize) {
    throw ValidationError("component library has only " + std::to_string(kDefaultLibrarySize) + " components");
  }
  std::vector<CmcsConfiguration> out;
  CmcsConfiguration cfg;
  // 9 nested digits in lexicographic order: 3 components then 6 transitions
  const std::size_t comps = library_size * library_size * library_size;
  for (std::size_t ci = 0; ci < comps; ++ci) {
    cfg.components = {static_cast<Component>(ci / (library_size * library_size)),
                      static_cast<Component>(ci / library_size % library_size),
                      static_cast<Component>(ci % library_size)};
    for (std::size_t ti = 0; ti < 729; ++ti) {
      std::size_t rest = ti;
      for (int j = 2; j >= 0; --j) {
        cfg.succ_fail[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(rest % 3);
        rest /= 3;
      }
      for (int j = 2; j >= 0; --j) {
        cfg.succ_improve[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(rest % 3);
        rest /= 3;
      }
      if (cfg.all_slots_reachable() && cfg.is_canonical()) out.push_back(cfg);
    }
  }
  return out;
}

std::vector<bool> initial_open_set(const SplpInstance& instance) {
  Rng rng(derive_seed(instance.seed, 5));
  std::vector<bool> open(instance.facilities());
  bool any = false;
  for (std::size_t f = 0; f < open.size(); ++f) {
    open[f] = rng.uniform01() < 0.5;
    any = any || open[f];
  }
  if (!any) open[rng.below(open.size())] = true;
  return open;
}

std::uint64_t cmcs_run_seed(std::uint64_t base_seed, std::size_t instance_index, const CmcsConfiguration& config) {
  return derive_seed(derive_seed(base_seed, 0x5eed0000ULL + instance_index), config.code());
}

std::vector<double> cmcs_trace(const SplpInstance& instance, const CmcsConfiguration& config,
                               const CheckpointSchedule& schedule, std::uint64_t run_seed) {
  SplpSolution solution(instance, initial_open_set(instance));
  Rng rng(run_seed);
  std::vector<double> trace;
  trace.reserve(schedule.count());
  double best = solution.objective();
  std::uint8_t slot = 0;
  std::size_t next = 0;
  const VirtualTime budget = schedule.full_budget();
  for (VirtualTime tick = 1; tick <= budget; ++tick) {
    const bool improved = apply_component(config.components[slot], solution, rng);
    best = std::min(best, solution.objective());
    slot = improved ? config.succ_improve[slot] : config.succ_fail[slot];
    if (tick == schedule.time(next)) {
      trace.push_back(best);
      ++next;
    }
  }
  return trace;
}

std::vector<CmcsEntry> sample_cmcs_entries(std::size_t library_size, std::size_t max_configs, std::uint64_t seed) {
  const auto all = enumerate_cmcs_configurations(library_size);
  std::vector<std::size_t> picked(all.size());
  for (std::size_t i = 0; i < picked.size(); ++i) picked[i] = i;
  if (max_configs > 0 && max_configs < all.size()) {
    // partial Fisher-Yates
    Rng rng(derive_seed(seed, 6));
    for (std::size_t i = 0; i < max_configs; ++i) std::swap(picked[i], picked[i + rng.below(picked.size() - i)]);
    picked.resize(max_configs);
    std::sort(picked.begin(), picked.end());
  }
  std::vector<CmcsEntry> entries;
  entries.reserve(picked.size());
  for (std::size_t idx : picked) entries.push_back({idx, all[idx]});
  return entries;
}

std::vector<SplpInstance> generate_splp_instances(std::size_t facilities, std::size_t customers, std::size_t count,
                                                  std::uint64_t seed) {
  std::vector<SplpInstance> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(generate_splp_instance(facilities, customers, derive_seed(seed, 100 + i)));
  }
  return out;
}

RawTraceSet cmcs_raw_traces(const std::vector<SplpInstance>& instances, const std::vector<CmcsEntry>& configs,
                            const CheckpointSchedule& schedule, std::uint64_t seed) {
  if (instances.empty()) throw ValidationError("CMCS evaluation needs at least one instance");
  if (configs.empty()) throw ValidationError("CMCS evaluation needs at least one configuration");
  std::vector<ConfigId> ids;
  for (const auto& e : configs) ids.push_back(e.id);
  std::vector<std::string> names;
  for (const auto& inst : instances) {
    inst.validate();
    names.push_back(inst.name);
  }
  RawTraceSet raw(std::move(ids), std::move(names), schedule.count());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      std::vector<double> trace;
      try {
        trace = cmcs_trace(instances[i], configs[c].config, schedule, cmcs_run_seed(seed, i, configs[c].config));
      } catch (const std::exception& e) {
        throw EvaluationError(configs[c].id, e.what());
      }
      std::copy(trace.begin(), trace.end(), raw.run(c, i).begin());
    }
  }
  return raw;
}

CmcsEvaluator::CmcsEvaluator(std::vector<SplpInstance> instances, std::vector<CmcsEntry> configs,
                             CheckpointSchedule schedule, std::uint64_t seed)
    : raw_(std::make_unique<RawTraceSet>(cmcs_raw_traces(instances, configs, schedule, seed))),
      replay_(std::make_unique<ReplayEvaluator>(normalize(*raw_, schedule))) {}

}  // namespace perfenv
