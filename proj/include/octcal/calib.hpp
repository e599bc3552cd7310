#pragma once

#include <functional>
#include <string>

#include "octcal/demod.hpp"
#include "octcal/lcs.hpp"
#include "octcal/synth.hpp"

namespace octcal {

enum class InterpKind { Previous, Next, Linear, CubicSpline };

std::string to_string(InterpKind k);

/// Interferogram samples on an equidistant wavenumber grid, however obtained.
struct CalibratedScan {
  ArrayX k_values;  // rad/m
  ArrayX samples;
  std::string method;
  double osr = 0.0;
  InterpKind interp = InterpKind::Linear;
  std::string estimator;

  double spacing() const { return k_values.size() > 1 ? k_values[1] - k_values[0] : 0.0; }
};

/// Depth-resolved magnitude, the reconstruction end product.
struct AScan {
  ArrayX depth_axis;  // m, uniform, [0, z_max]
  ArrayX magnitude;
};

/// Proposed real-time path: an ideal track-and-sample ADC clocked by the
/// calibrating clock reads the continuous interferogram at the event times;
/// k_values are the ladder levels themselves, no interpolation anywhere.
CalibratedScan realtime_calibrate(const SweepProfile& profile,
                                  const ReflectivityProfile& refl,
                                  const SourceSpectrum& spec,
                                  const LevelLadder& ladder,
                                  const CalibClock& clock,
                                  const NoiseModel& noise,
                                  const InterferogramOptions& opt = {});

using Estimator = std::function<PhaseEstimate(const SampledSignal&)>;

struct ResampleOptions {
  InterpKind interp = InterpKind::CubicSpline;
  double osr = 0.0;            // recorded in metadata
  bool nearest_index = false;  // nearest-sample lookup instead of bracketing
  // Registration fixture: absolute wavenumber known at one instant, so the
  // estimated phase maps onto the ladder's absolute axis.
  double anchor_time = 0.0;
  double anchor_k = 0.0;
  std::string estimator_tag;
};

/// Conventional interpolation/lookup/resampling baseline: estimator gives
/// k_hat[n]; each ladder level is located on k_hat by bracketing inverse
/// interpolation (or nearest index), and the interferogram interpolant is
/// evaluated there.
CalibratedScan resample_calibrate(const SampledSignal& mzi,
                                  const SampledSignal& interf,
                                  const Estimator& estimator, double dl,
                                  const LevelLadder& ladder,
                                  const ResampleOptions& opt);

enum class ZeroCrossingMode { Basic, Quadrature };

/// k-clock from the MZI itself: sample the interferogram at MZI zero
/// crossings (spacing pi/dl in k), plus extrema in quadrature mode
/// (spacing pi/(2 dl)).
CalibratedScan zero_crossing_calibrate(const SampledSignal& mzi,
                                       const SampledSignal& interf,
                                       ZeroCrossingMode mode, double dl);

/// Removes DC/reference terms using a reference-only scan on the same grid.
CalibratedScan dc_subtract(const CalibratedScan& scan,
                           const CalibratedScan& reference_scan);

/// Inverse transform over k; single-sided magnitude with depth axis
/// z_j = j*pi/(spacing*fft_len), so the last bin sits at z_max.
AScan reconstruct_ascan(const CalibratedScan& scan, Eigen::Index fft_len,
                        bool hann_window = false);

/// Uncalibrated control: pretend the uniform-time samples were uniform in k
/// across the swept span and reconstruct.
AScan reconstruct_uncalibrated(const SampledSignal& interf,
                               const SweepProfile& profile,
                               Eigen::Index fft_len);

/// Catmull-Rom upsampling of a uniform signal; stands in for the DAC and
/// smoothing in front of an analog level-crossing sampler.
SampledSignal upsample_cubic(const SampledSignal& sig, int factor);

struct EnvelopeCalibOptions {
  int m_c = 8;           // sampling instants per MZI fringe cycle
  double margin = 0.08;  // fraction of the tracked phase span trimmed per side
  int upsample = 8;
  double delay_samples = 4.0;  // path delay of the equalizer output
};

/// Envelope/LCS path: equalize the sampled MZI, reconstruct its phase on the
/// DAC-upsampled waveform, fire one event per 2*pi/m_c of phase (half-offset
/// levels avoid the cosine extrema), and read the continuous interferogram at
/// the event times. k spacing is exactly 2*pi/(m_c*dl); the absolute k origin
/// is the phase origin of the track, so only spacing is meaningful.
CalibratedScan envelope_calibrate(const SweepProfile& profile,
                                  const ReflectivityProfile& refl,
                                  const SourceSpectrum& spec,
                                  const SampledSignal& mzi,
                                  const MziGeometry& geom,
                                  const EnvelopeCalibOptions& opt,
                                  const NoiseModel& sample_noise,
                                  const InterferogramOptions& iopt = {});

/// Natural cubic spline on a uniform grid; also the Phi evaluator for the
/// simpler kinds.
class Interpolant {
 public:
  Interpolant(const SampledSignal& sig, InterpKind kind);
  double operator()(double t) const;

 private:
  InterpKind kind_;
  double t0_ = 0.0, dt_ = 0.0;
  ArrayX y_;
  ArrayX m_;  // spline second derivatives
};

}  // namespace octcal
