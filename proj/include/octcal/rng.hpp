#pragma once

#include <cstdint>

#include "octcal/types.hpp"

namespace octcal {

// Counter-based generator: every draw is a pure function of
// (seed, stream, index), so parallel trials reproduce bit-identically
// regardless of evaluation order.
struct CounterRng {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Uniform in (0, 1], never exactly 0.
  double uniform(std::uint64_t index) const;

  /// Standard normal via Box-Muller on two sub-draws of `index`.
  double gaussian(std::uint64_t index) const;
};

/// len iid N(0, sigma^2) samples from stream `stream` of `seed`.
ArrayX gaussian_noise(Eigen::Index len, double sigma, std::uint64_t seed,
                      std::uint64_t stream);

/// Seed for trial `trial` derived from `base`; collision-resistant mix.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial);

}  // namespace octcal
