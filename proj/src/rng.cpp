#include "octcal/rng.hpp"

#include <cmath>

namespace octcal {
namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

}  // namespace

double CounterRng::uniform(std::uint64_t index) const {
  const std::uint64_t bits = mix3(seed, stream, index);
  // 53-bit mantissa in (0, 1]
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::gaussian(std::uint64_t index) const {
  const double u1 = uniform(2 * index);
  const double u2 = uniform(2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

ArrayX gaussian_noise(Eigen::Index len, double sigma, std::uint64_t seed,
                      std::uint64_t stream) {
  ArrayX out = ArrayX::Zero(len);
  if (sigma == 0.0) return out;
  const CounterRng rng{seed, stream};
  for (Eigen::Index i = 0; i < len; ++i)
    out[i] = sigma * rng.gaussian(static_cast<std::uint64_t>(i));
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial) {
  return mix3(base, 0x6f637463616cULL, trial);
}

}  // namespace octcal
