#pragma once

// Checkpoint schedules, raw traces, normalized performance profiles and the
// quality matrix that every other module consumes.
//
// Quality convention: 0 is the best value seen on an instance by any
// configuration, 1 the worst. Profiles record best-so-far quality and are
// therefore monotone non-increasing along the checkpoint axis.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace perfenv {

using ConfigId = std::uint64_t;

/// Virtual clock units (milliseconds or component ticks). Never wall-clock.
using VirtualTime = std::int64_t;

/// Geometric checkpoints t_k = base_time * 2^k, k = 0..count-1.
class CheckpointSchedule {
 public:
  explicit CheckpointSchedule(VirtualTime base_time = 1, std::size_t count = 11);

  VirtualTime base_time() const noexcept { return base_time_; }
  std::size_t count() const noexcept { return count_; }
  std::size_t final_index() const noexcept { return count_ - 1; }
  VirtualTime time(std::size_t k) const;
  VirtualTime full_budget() const noexcept { return time(final_index()); }
  std::vector<VirtualTime> times() const;

  friend bool operator==(const CheckpointSchedule&, const CheckpointSchedule&) = default;

 private:
  VirtualTime base_time_;
  std::size_t count_;
};

/// Raw best-so-far objective values (minimization) indexed by
/// [config][instance][checkpoint]. Dense by construction.
class RawTraceSet {
 public:
  RawTraceSet(std::vector<ConfigId> configs, std::vector<std::string> instances,
              std::size_t checkpoint_count);

  const std::vector<ConfigId>& configs() const noexcept { return configs_; }
  const std::vector<std::string>& instances() const noexcept { return instances_; }
  std::size_t checkpoint_count() const noexcept { return checkpoints_; }

  double& at(std::size_t config_index, std::size_t instance_index, std::size_t k);
  double at(std::size_t config_index, std::size_t instance_index, std::size_t k) const;

  /// One run's trace (all checkpoints of a (config, instance) pair).
  std::span<double> run(std::size_t config_index, std::size_t instance_index);
  std::span<const double> run(std::size_t config_index, std::size_t instance_index) const;

 private:
  std::size_t offset(std::size_t c, std::size_t i, std::size_t k) const;

  std::vector<ConfigId> configs_;
  std::vector<std::string> instances_;
  std::size_t checkpoints_;
  std::vector<double> objective_;
};

struct PerformanceProfile {
  ConfigId config_id = 0;
  std::vector<double> quality;

  friend bool operator==(const PerformanceProfile&, const PerformanceProfile&) = default;
};

/// Throws ValidationError unless every value is in [0,1] and the sequence is
/// monotone non-increasing.
void validate_profile(const PerformanceProfile& profile);

/// All configurations x all checkpoints. Rows are kept sorted by config id.
class QualityMatrix {
 public:
  QualityMatrix(CheckpointSchedule schedule, std::vector<PerformanceProfile> profiles);

  const CheckpointSchedule& schedule() const noexcept { return schedule_; }
  const std::vector<PerformanceProfile>& profiles() const noexcept { return profiles_; }
  std::size_t size() const noexcept { return profiles_.size(); }
  bool empty() const noexcept { return profiles_.empty(); }

  const PerformanceProfile& operator[](std::size_t row) const { return profiles_[row]; }
  double quality(std::size_t row, std::size_t k) const { return profiles_[row].quality[k]; }

  /// Row index of a configuration id; throws std::out_of_range if unknown.
  std::size_t index_of(ConfigId id) const;
  bool contains(ConfigId id) const;

  const PerformanceProfile& profile(ConfigId id) const { return profiles_[index_of(id)]; }

 private:
  CheckpointSchedule schedule_;
  std::vector<PerformanceProfile> profiles_;
};

/// Which objective values define an instance's best/worst reference.
enum class NormalizationReference {
  /// min/max over all configurations and all checkpoints (default)
  whole_run,
  /// min/max over final-checkpoint values only; earlier values above the
  /// final worst are clamped to 1
  final_checkpoint,
};

struct NormalizeOptions {
  NormalizationReference reference = NormalizationReference::whole_run;
};

/// Min-max scales each instance into [0,1] and averages over instances.
/// An instance whose best and worst coincide scales to 0 everywhere.
QualityMatrix normalize(const RawTraceSet& raw, const CheckpointSchedule& schedule,
                        const NormalizeOptions& options = {});

/// Running minimum: output[k] = min(input[0..k]).
PerformanceProfile enforce_monotone(PerformanceProfile profile);

/// Percentage of configurations strictly better than `config_id` at
/// checkpoint k, in [0,100).
double rank_percentile(const QualityMatrix& matrix, ConfigId config_id, std::size_t k);

/// Quality at the final checkpoint (the long-run value).
double final_quality(const PerformanceProfile& profile);

}  // namespace perfenv
