#pragma once

// Synthetic quality matrices with a tunable link between early and final
// performance.
//
// For configuration c (in id order 0..N-1) the generator draws, from one
// seeded stream and in this order, a_c ~ N(0,1), z_c ~ N(0,1) and then
// eps_{c,0..K-1} ~ N(0,1). With p = 2 sin(pi * rho / 6),
//
//   b_c = -p * a_c + sqrt(1 - p^2) * z_c
//   F_c = Phi(a_c)                                final level in [0,1]
//   r_c = 0.2 + 1.8 * Phi(b_c)                    convergence rate
//   q_c(k) = clamp01(F_c + (1 - F_c) exp(-r_c k) + sigma * eps_{c,k})
//
// followed by a running minimum over k. The Gaussian copula makes the
// Spearman correlation of r_c and 1 - F_c equal to rho. If several
// configurations share the smallest final quality, all but the lowest id
// are shifted up by j * 1e-9 (j = 1, 2, ...) so the best one is unique.

#include <cstdint>
#include <vector>

#include "perfenv/profiles.hpp"

namespace perfenv {

struct SyntheticParams {
  std::size_t configs = 1000;
  double correlation = 0.85;
  double noise = 0.03;
  std::uint64_t seed = 0;
  CheckpointSchedule schedule{};

  void validate() const;
};

inline constexpr double kSyntheticRateMin = 0.2;
inline constexpr double kSyntheticRateSpan = 1.8;

struct SyntheticLatent {
  double final_level = 0.0;
  double rate = 0.0;
};

/// The per-configuration (F_c, r_c) pairs behind `generate_synthetic`.
std::vector<SyntheticLatent> synthetic_latents(const SyntheticParams& params);

QualityMatrix generate_synthetic(const SyntheticParams& params);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace perfenv
