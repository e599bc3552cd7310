#pragma once

#include "octcal/signal.hpp"
#include "octcal/sweep.hpp"

namespace octcal {

// RNG stream ids keep MZI and interferogram noise independent for one seed.
inline constexpr std::uint64_t kStreamMzi = 1;
inline constexpr std::uint64_t kStreamInterf = 2;
inline constexpr std::uint64_t kStreamPhase = 3;

/// Calibrating-signal value C*S(k(t))*cos(dl*k(t)) at one instant, no noise.
double mzi_value(const SweepProfile& profile, const MziGeometry& geom,
                 const SourceSpectrum& spec, double t);

/// I_MZI over `grid` with additive white Gaussian noise.
SampledSignal synth_mzi(const SweepProfile& profile, const MziGeometry& geom,
                        const SourceSpectrum& spec, const ArrayX& grid,
                        const NoiseModel& noise);

/// Interferogram model options. The interferometric phase of a reflector at
/// z is the round-trip 2*k*(z_ref - z). `rolloff_dr_k`, when positive,
/// applies the finite-linewidth amplitude factor
/// exp(-delta_r_k^2 * z^2 / (4 ln 2)) per cross term.
struct InterferogramOptions {
  bool include_auto = false;
  double rolloff_dr_k = 0.0;
  // Sinusoidal axial motion of every sample reflector:
  // z(t) = z + amp*sin(omega*t).
  double perturb_amp = 0.0;
  double perturb_omega = 0.0;
};

double interferogram_value(const SweepProfile& profile,
                           const ReflectivityProfile& refl,
                           const SourceSpectrum& spec, double t,
                           const InterferogramOptions& opt = {});

/// I_D over `grid` (uniform or not) with noise; DC term (1/4)S*[R_R+sum R_Si],
/// cross terms (1/2)S*sqrt(R_R R_Si)*cos(2k(t)(z_R - z_Si)), and, when
/// enabled, autocorrelation terms over reflector pairs. Detector gain folded
/// to 1.
SampledSignal synth_interferogram(const SweepProfile& profile,
                                  const ReflectivityProfile& refl,
                                  const SourceSpectrum& spec, const ArrayX& grid,
                                  const NoiseModel& noise,
                                  const InterferogramOptions& opt = {});

struct QuantizeResult {
  SampledSignal signal;
  Eigen::Index clipped = 0;
};

/// Mid-rise uniform quantization to 2^Q levels over [-U/2, U/2]; values on a
/// level boundary round up; out-of-range samples saturate and are counted.
QuantizeResult quantize(const SampledSignal& sig, const AdcModel& adc);

/// z_nominal + amp*sin(omega_z*t).
double perturb_depth(double z_nominal, double amp, double omega_z, double t);

}  // namespace octcal
