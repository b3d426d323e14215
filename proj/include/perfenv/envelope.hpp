#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "perfenv/profiles.hpp"

namespace perfenv {

/// Pointwise worst-case quality over a set of profiles.
struct CutoffLine {
  std::vector<double> value;

  friend bool operator==(const CutoffLine&, const CutoffLine&) = default;
};

/// Translates "rises above the cutoff line by more than X" into a threshold.
///
/// multiplicative: violation iff quality > factor * cutoff + floor
/// additive:       violation iff quality > cutoff + offset + floor
/// disabled:       never violates (every run completes)
///
/// `floor` is an absolute epsilon added to the threshold, 0 by default. With
/// the multiplicative mode and floor 0 a zero cutoff is exceeded by any
/// positive quality.
class MarginPolicy {
 public:
  enum class Mode { multiplicative, additive, disabled };

  static MarginPolicy multiplicative(double factor, double floor = 0.0);
  static MarginPolicy additive(double offset, double floor = 0.0);
  static MarginPolicy disabled();

  /// Parses the CLI syntax `x<factor>`, `+<offset>` or `off`.
  static MarginPolicy parse(const std::string& text);
  std::string to_string() const;

  Mode mode() const noexcept { return mode_; }
  /// factor (multiplicative) or offset (additive); 0 when disabled
  double parameter() const noexcept { return parameter_; }
  double floor() const noexcept { return floor_; }

  double threshold(double cutoff) const;
  bool exceeds(double quality, double cutoff) const;

  friend bool operator==(const MarginPolicy&, const MarginPolicy&) = default;

 private:
  MarginPolicy(Mode mode, double parameter, double floor) : mode_(mode), parameter_(parameter), floor_(floor) {}

  Mode mode_;
  double parameter_;
  double floor_;
};

CutoffLine worst_case_envelope(std::span<const PerformanceProfile> profiles);
CutoffLine worst_case_envelope(std::span<const PerformanceProfile* const> profiles);

/// ceil(fraction * N) configuration ids with the smallest final quality,
/// ordered by (final quality, id).
std::vector<ConfigId> top_fraction(const QualityMatrix& matrix, double fraction);

/// Number of configurations selected by `top_fraction` for N rows.
std::size_t top_fraction_size(std::size_t n, double fraction);

CutoffLine exact_cutoff_line(const QualityMatrix& matrix, double fraction);

/// Whether `partial_quality[k]` rises above the cutoff by more than the margin.
/// The final checkpoint is never a termination point; passing it is an error.
bool violates(std::span<const double> partial_quality, const CutoffLine& cutoff, const MarginPolicy& policy,
              std::size_t k);

}  // namespace perfenv
