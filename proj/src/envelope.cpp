#include "perfenv/envelope.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "perfenv/error.hpp"

namespace perfenv {

MarginPolicy MarginPolicy::multiplicative(double factor, double floor) {
  if (!(factor > 1.0) || !std::isfinite(factor)) throw ValidationError("margin factor must be > 1");
  if (!(floor >= 0.0)) throw ValidationError("margin floor must be >= 0");
  return {Mode::multiplicative, factor, floor};
}

MarginPolicy MarginPolicy::additive(double offset, double floor) {
  if (!(offset > 0.0) || !std::isfinite(offset)) throw ValidationError("margin offset must be > 0");
  if (!(floor >= 0.0)) throw ValidationError("margin floor must be >= 0");
  return {Mode::additive, offset, floor};
}

MarginPolicy MarginPolicy::disabled() { return {Mode::disabled, 0.0, 0.0}; }

namespace {

double parse_number(std::string_view text, const std::string& whole) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("bad margin '" + whole + "' (expected x<factor>, +<offset> or off)");
  }
  return value;
}

}  // namespace

MarginPolicy MarginPolicy::parse(const std::string& text) {
  if (text == "off") return disabled();
  if (text.size() >= 2 && text[0] == 'x') return multiplicative(parse_number(std::string_view(text).substr(1), text));
  if (text.size() >= 2 && text[0] == '+') return additive(parse_number(std::string_view(text).substr(1), text));
  throw ValidationError("bad margin '" + text + "' (expected x<factor>, +<offset> or off)");
}

std::string MarginPolicy::to_string() const {
  char buf[64];
  switch (mode_) {
    case Mode::multiplicative:
      std::snprintf(buf, sizeof buf, "x%.17g", parameter_);
      return buf;
    case Mode::additive:
      std::snprintf(buf, sizeof buf, "+%.17g", parameter_);
      return buf;
    case Mode::disabled:
      return "off";
  }
  return "off";
}

double MarginPolicy::threshold(double cutoff) const {
  switch (mode_) {
    case Mode::multiplicative:
      return parameter_ * cutoff + floor_;
    case Mode::additive:
      return cutoff + parameter_ + floor_;
    case Mode::disabled:
      return HUGE_VAL;
  }
  return HUGE_VAL;
}

bool MarginPolicy::exceeds(double quality, double cutoff) const {
  return mode_ != Mode::disabled && quality > threshold(cutoff);
}

CutoffLine worst_case_envelope(std::span<const PerformanceProfile* const> profiles) {
  if (profiles.empty()) throw ValidationError("envelope of an empty profile set");
  CutoffLine line{profiles.front()->quality};
  for (const auto* p : profiles.subspan(1)) {
    if (p->quality.size() != line.value.size()) throw ValidationError("envelope of profiles with unequal lengths");
    for (std::size_t k = 0; k < line.value.size(); ++k) line.value[k] = std::max(line.value[k], p->quality[k]);
  }
  return line;
}

CutoffLine worst_case_envelope(std::span<const PerformanceProfile> profiles) {
  std::vector<const PerformanceProfile*> refs;
  refs.reserve(profiles.size());
  for (const auto& p : profiles) refs.push_back(&p);
  return worst_case_envelope(std::span<const PerformanceProfile* const>(refs));
}

std::size_t top_fraction_size(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ValidationError("fraction must be in (0,1]");
  // 0.07 * 100 evaluates to 7.000000000000001; do not let that round up to 8.
  const double exact = fraction * static_cast<double>(n);
  auto size = static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
  return std::clamp<std::size_t>(size, 1, n);
}

std::vector<ConfigId> top_fraction(const QualityMatrix& matrix, double fraction) {
  if (matrix.empty()) throw ValidationError("top fraction of an empty matrix");
  const std::size_t count = top_fraction_size(matrix.size(), fraction);
  std::vector<std::size_t> rows(matrix.size());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
  const std::size_t last = matrix.schedule().final_index();
  // rows are id-sorted, so row index breaks ties by id
  auto better = [&](std::size_t a, std::size_t b) {
    const double qa = matrix.quality(a, last);
    const double qb = matrix.quality(b, last);
    return qa != qb ? qa < qb : a < b;
  };
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(count), rows.end(), better);
  std::vector<ConfigId> ids(count);
  for (std::size_t i = 0; i < count; ++i) ids[i] = matrix[rows[i]].config_id;
  return ids;
}

CutoffLine exact_cutoff_line(const QualityMatrix& matrix, double fraction) {
  std::vector<const PerformanceProfile*> members;
  for (ConfigId id : top_fraction(matrix, fraction)) members.push_back(&matrix.profile(id));
  return worst_case_envelope(std::span<const PerformanceProfile* const>(members));
}

bool violates(std::span<const double> partial_quality, const CutoffLine& cutoff, const MarginPolicy& policy,
              std::size_t k) {
  if (k + 1 >= cutoff.value.size()) {
    throw std::out_of_range("checkpoint " + std::to_string(k) + " is not a termination point");
  }
  if (k >= partial_quality.size()) {
    throw std::out_of_range("partial profile does not reach checkpoint " + std::to_string(k));
  }
  return policy.exceeds(partial_quality[k], cutoff.value[k]);
}

}  // namespace perfenv
