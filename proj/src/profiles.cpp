#include "perfenv/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "perfenv/error.hpp"

namespace perfenv {

CheckpointSchedule::CheckpointSchedule(VirtualTime base_time, std::size_t count)
    : base_time_(base_time), count_(count) {
  if (base_time_ < 1) throw ValidationError("checkpoint base time must be >= 1");
  if (count_ < 2) throw ValidationError("checkpoint schedule needs at least 2 checkpoints");
  if (count_ > 62 || (base_time_ << (count_ - 1)) >> (count_ - 1) != base_time_) {
    throw ValidationError("checkpoint schedule overflows the virtual clock");
  }
}

VirtualTime CheckpointSchedule::time(std::size_t k) const {
  if (k >= count_) throw std::out_of_range("checkpoint index out of range");
  return base_time_ << k;
}

std::vector<VirtualTime> CheckpointSchedule::times() const {
  std::vector<VirtualTime> out(count_);
  for (std::size_t k = 0; k < count_; ++k) out[k] = base_time_ << k;
  return out;
}

RawTraceSet::RawTraceSet(std::vector<ConfigId> configs, std::vector<std::string> instances,
                         std::size_t checkpoint_count)
    : configs_(std::move(configs)),
      instances_(std::move(instances)),
      checkpoints_(checkpoint_count),
      objective_(configs_.size() * instances_.size() * checkpoints_, 0.0) {}

std::size_t RawTraceSet::offset(std::size_t c, std::size_t i, std::size_t k) const {
  return (c * instances_.size() + i) * checkpoints_ + k;
}

double& RawTraceSet::at(std::size_t c, std::size_t i, std::size_t k) { return objective_[offset(c, i, k)]; }

double RawTraceSet::at(std::size_t c, std::size_t i, std::size_t k) const {
  return objective_[offset(c, i, k)];
}

std::span<double> RawTraceSet::run(std::size_t c, std::size_t i) {
  return {objective_.data() + offset(c, i, 0), checkpoints_};
}

std::span<const double> RawTraceSet::run(std::size_t c, std::size_t i) const {
  return {objective_.data() + offset(c, i, 0), checkpoints_};
}

void validate_profile(const PerformanceProfile& profile) {
  const auto& q = profile.quality;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!(q[k] >= 0.0 && q[k] <= 1.0)) {
      throw ValidationError("configuration " + std::to_string(profile.config_id) +
                            ": quality outside [0,1] at checkpoint " + std::to_string(k));
    }
    if (k > 0 && q[k] > q[k - 1]) {
      throw ValidationError("configuration " + std::to_string(profile.config_id) +
                            ": profile increases at checkpoint " + std::to_string(k));
    }
  }
}

QualityMatrix::QualityMatrix(CheckpointSchedule schedule, std::vector<PerformanceProfile> profiles)
    : schedule_(schedule), profiles_(std::move(profiles)) {
  std::sort(profiles_.begin(), profiles_.end(),
            [](const auto& a, const auto& b) { return a.config_id < b.config_id; });
  for (std::size_t r = 0; r < profiles_.size(); ++r) {
    if (r > 0 && profiles_[r].config_id == profiles_[r - 1].config_id) {
      throw ValidationError("duplicate configuration id " + std::to_string(profiles_[r].config_id));
    }
    if (profiles_[r].quality.size() != schedule_.count()) {
      throw ValidationError("configuration " + std::to_string(profiles_[r].config_id) + " has " +
                            std::to_string(profiles_[r].quality.size()) + " checkpoints, schedule has " +
                            std::to_string(schedule_.count()));
    }
    validate_profile(profiles_[r]);
  }
}

std::size_t QualityMatrix::index_of(ConfigId id) const {
  auto it = std::lower_bound(profiles_.begin(), profiles_.end(), id,
                             [](const PerformanceProfile& p, ConfigId v) { return p.config_id < v; });
  if (it == profiles_.end() || it->config_id != id) {
    throw std::out_of_range("unknown configuration id " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - profiles_.begin());
}

bool QualityMatrix::contains(ConfigId id) const {
  auto it = std::lower_bound(profiles_.begin(), profiles_.end(), id,
                             [](const PerformanceProfile& p, ConfigId v) { return p.config_id < v; });
  return it != profiles_.end() && it->config_id == id;
}

QualityMatrix normalize(const RawTraceSet& raw, const CheckpointSchedule& schedule,
                        const NormalizeOptions& options) {
  const std::size_t n_configs = raw.configs().size();
  const std::size_t n_instances = raw.instances().size();
  const std::size_t n_k = raw.checkpoint_count();
  if (n_configs == 0 || n_instances == 0) throw ValidationError("empty trace set");
  if (n_k != schedule.count()) {
    throw ValidationError("trace set has " + std::to_string(n_k) + " checkpoints, schedule has " +
                          std::to_string(schedule.count()));
  }

  for (std::size_t c = 0; c < n_configs; ++c) {
    for (std::size_t i = 0; i < n_instances; ++i) {
      auto run = raw.run(c, i);
      for (std::size_t k = 0; k < n_k; ++k) {
        if (!std::isfinite(run[k])) {
          throw ValidationError("non-finite objective for configuration " + std::to_string(raw.configs()[c]) +
                                ", instance " + raw.instances()[i]);
        }
        if (k > 0 && run[k] > run[k - 1]) {
          throw ValidationError("non-monotone trace for configuration " + std::to_string(raw.configs()[c]) +
                                ", instance " + raw.instances()[i]);
        }
      }
    }
  }

  std::vector<double> best(n_instances, std::numeric_limits<double>::infinity());
  std::vector<double> worst(n_instances, -std::numeric_limits<double>::infinity());
  const bool final_only = options.reference == NormalizationReference::final_checkpoint;
  for (std::size_t c = 0; c < n_configs; ++c) {
    for (std::size_t i = 0; i < n_instances; ++i) {
      auto run = raw.run(c, i);
      const std::size_t first = final_only ? n_k - 1 : 0;
      for (std::size_t k = first; k < n_k; ++k) {
        best[i] = std::min(best[i], run[k]);
        worst[i] = std::max(worst[i], run[k]);
      }
    }
  }

  std::vector<PerformanceProfile> profiles(n_configs);
  for (std::size_t c = 0; c < n_configs; ++c) {
    auto& profile = profiles[c];
    profile.config_id = raw.configs()[c];
    profile.quality.assign(n_k, 0.0);
    for (std::size_t i = 0; i < n_instances; ++i) {
      const double range = worst[i] - best[i];
      if (range <= 0.0) continue;
      auto run = raw.run(c, i);
      for (std::size_t k = 0; k < n_k; ++k) {
        profile.quality[k] += std::clamp((run[k] - best[i]) / range, 0.0, 1.0);
      }
    }
    for (double& q : profile.quality) q /= static_cast<double>(n_instances);
    profile = enforce_monotone(std::move(profile));
  }
  return QualityMatrix(schedule, std::move(profiles));
}

PerformanceProfile enforce_monotone(PerformanceProfile profile) {
  auto& q = profile.quality;
  for (std::size_t k = 1; k < q.size(); ++k) q[k] = std::min(q[k], q[k - 1]);
  return profile;
}

double rank_percentile(const QualityMatrix& matrix, ConfigId config_id, std::size_t k) {
  if (k >= matrix.schedule().count()) throw std::out_of_range("checkpoint index out of range");
  const double own = matrix.profile(config_id).quality[k];
  std::size_t better = 0;
  for (const auto& p : matrix.profiles()) {
    if (p.quality[k] < own) ++better;
  }
  return 100.0 * static_cast<double>(better) / static_cast<double>(matrix.size());
}

double final_quality(const PerformanceProfile& profile) { return profile.quality.back(); }

}  // namespace perfenv
