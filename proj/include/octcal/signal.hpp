#pragma once

#include <cstdint>

#include "octcal/types.hpp"

namespace octcal {

/// Real-valued waveform with its time base. Uniform signals carry their
/// rate and satisfy times[n] = times[0] + n/rate.
struct SampledSignal {
  ArrayX times;
  ArrayX values;
  bool uniform = false;
  double rate = 0.0;  // samples/s, meaningful when uniform

  Eigen::Index size() const { return values.size(); }

  static SampledSignal make_uniform(double rate, ArrayX values,
                                    double t0 = 0.0);
  static SampledSignal make(ArrayX times, ArrayX values);
};

/// Uniform grid of n samples covering [0, t_total) at n/t_total samples/s.
ArrayX uniform_grid(double t_total, Eigen::Index n);

struct NoiseModel {
  double sigma_w = 0.0;
  std::uint64_t seed = 0;

  static NoiseModel off() { return NoiseModel{0.0, 0}; }
  static NoiseModel make(double sigma_w, std::uint64_t seed);
};

struct AdcModel {
  int bits = 14;          // Q
  double full_scale = 2;  // U, volts
  double rate = 0.0;      // f_s, samples/s

  static AdcModel make(int bits, double full_scale, double rate);
  double lsb() const { return full_scale / static_cast<double>(1 << bits); }
};

}  // namespace octcal
