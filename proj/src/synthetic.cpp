#include "perfenv/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "perfenv/error.hpp"
#include "perfenv/rng.hpp"

namespace perfenv {
namespace {

constexpr std::uint64_t kSyntheticStream = 3;

struct Draws {
  std::vector<SyntheticLatent> latent;
  std::vector<double> eps;  // [c * K + k]
};

Draws draw(const SyntheticParams& params) {
  params.validate();
  const std::size_t n = params.configs;
  const std::size_t n_k = params.schedule.count();
  const double p = 2.0 * std::sin(std::numbers::pi * params.correlation / 6.0);
  const double q = std::sqrt(std::max(0.0, 1.0 - p * p));

  Rng rng(derive_seed(params.seed, kSyntheticStream));
  Draws d;
  d.latent.resize(n);
  d.eps.resize(n * n_k);
  for (std::size_t c = 0; c < n; ++c) {
    const double a = rng.normal();
    const double z = rng.normal();
    const double b = -p * a + q * z;
    d.latent[c] = {normal_cdf(a), kSyntheticRateMin + kSyntheticRateSpan * normal_cdf(b)};
    for (std::size_t k = 0; k < n_k; ++k) d.eps[c * n_k + k] = rng.normal();
  }
  return d;
}

}  // namespace

void SyntheticParams::validate() const {
  if (configs < 2) throw ValidationError("synthetic matrix needs at least 2 configurations");
  if (!(correlation >= -1.0 && correlation <= 1.0)) throw ValidationError("correlation must be in [-1,1]");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ValidationError("noise must be >= 0");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::vector<SyntheticLatent> synthetic_latents(const SyntheticParams& params) { return draw(params).latent; }

QualityMatrix generate_synthetic(const SyntheticParams& params) {
  const Draws d = draw(params);
  const std::size_t n = params.configs;
  const std::size_t n_k = params.schedule.count();

  std::vector<PerformanceProfile> profiles(n);
  for (std::size_t c = 0; c < n; ++c) {
    auto& p = profiles[c];
    p.config_id = c;
    p.quality.resize(n_k);
    const auto [level, rate] = d.latent[c];
    for (std::size_t k = 0; k < n_k; ++k) {
      const double v = level + (1.0 - level) * std::exp(-rate * static_cast<double>(k)) +
                       params.noise * d.eps[c * n_k + k];
      p.quality[k] = std::clamp(v, 0.0, 1.0);
    }
    p = enforce_monotone(std::move(p));
  }

  // unique best final quality
  double best = 1.0;
  for (const auto& p : profiles) best = std::min(best, final_quality(p));
  std::size_t shift = 0;
  for (auto& p : profiles) {
    if (final_quality(p) != best) continue;
    if (shift > 0) {
      for (double& v : p.quality) v = std::min(1.0, v + static_cast<double>(shift) * 1e-9);
    }
    ++shift;
  }
  return QualityMatrix(params.schedule, std::move(profiles));
}

}  // namespace perfenv
