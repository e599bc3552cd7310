#include "octcal/calib.hpp"

#include <cmath>
#include <stdexcept>

#include "octcal/fft.hpp"
#include "octcal/rng.hpp"

namespace octcal {

std::string to_string(InterpKind k) {
  switch (k) {
    case InterpKind::Previous: return "previous";
    case InterpKind::Next: return "next";
    case InterpKind::Linear: return "linear";
    case InterpKind::CubicSpline: return "cubic_spline";
  }
  return "?";
}

Interpolant::Interpolant(const SampledSignal& sig, InterpKind kind)
    : kind_(kind), y_(sig.values) {
  if (!sig.uniform || sig.size() < 2)
    throw std::invalid_argument("Interpolant: need a uniform signal with >= 2 samples");
  t0_ = sig.times[0];
  dt_ = 1.0 / sig.rate;
  if (kind_ == InterpKind::CubicSpline) {
    // natural boundary conditions; Thomas solve of the tridiagonal system
    const Eigen::Index n = y_.size();
    m_ = ArrayX::Zero(n);
    if (n > 2) {
      ArrayX c(n), d(n);
      c[1] = 0.0;
      d[1] = 0.0;
      double beta = 4.0;
      c[1] = 1.0 / beta;
      d[1] = (6.0 / (dt_ * dt_)) * (y_[2] - 2.0 * y_[1] + y_[0]) / beta;
      for (Eigen::Index i = 2; i < n - 1; ++i) {
        beta = 4.0 - c[i - 1];
        c[i] = 1.0 / beta;
        const double rhs = (6.0 / (dt_ * dt_)) * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]);
        d[i] = (rhs - d[i - 1]) / beta;
      }
      for (Eigen::Index i = n - 2; i >= 1; --i) m_[i] = d[i] - c[i] * m_[i + 1];
    }
  }
}

double Interpolant::operator()(double t) const {
  const Eigen::Index n = y_.size();
  double u = (t - t0_) / dt_;
  if (u <= 0.0) return y_[0];
  if (u >= static_cast<double>(n - 1)) return y_[n - 1];
  const Eigen::Index i = static_cast<Eigen::Index>(u);
  const double frac = u - static_cast<double>(i);
  switch (kind_) {
    case InterpKind::Previous:
      return y_[i];
    case InterpKind::Next:
      return frac == 0.0 ? y_[i] : y_[i + 1];
    case InterpKind::Linear:
      return y_[i] + frac * (y_[i + 1] - y_[i]);
    case InterpKind::CubicSpline: {
      const double a = 1.0 - frac, b = frac;
      return a * y_[i] + b * y_[i + 1] +
             ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) *
                 (dt_ * dt_) / 6.0;
    }
  }
  return y_[i];
}

CalibratedScan realtime_calibrate(const SweepProfile& profile,
                                  const ReflectivityProfile& refl,
                                  const SourceSpectrum& spec,
                                  const LevelLadder& ladder,
                                  const CalibClock& clock,
                                  const NoiseModel& noise,
                                  const InterferogramOptions& opt) {
  if (clock.events.size() == 0)
    throw std::domain_error("realtime_calibrate: empty calibrating clock");
  CalibratedScan scan;
  scan.method = "realtime";
  scan.samples.resize(clock.events.size());
  scan.k_values.resize(clock.events.size());
  const ArrayX noise_v = gaussian_noise(clock.events.size(), noise.sigma_w,
                                        noise.seed, kStreamInterf);
  for (Eigen::Index i = 0; i < clock.events.size(); ++i) {
    scan.samples[i] =
        interferogram_value(profile, refl, spec, clock.events[i], opt) + noise_v[i];
    scan.k_values[i] = ladder.levels[clock.level_index[static_cast<std::size_t>(i)]];
  }
  return scan;
}

CalibratedScan resample_calibrate(const SampledSignal& mzi,
                                  const SampledSignal& interf,
                                  const Estimator& estimator, double dl,
                                  const LevelLadder& ladder,
                                  const ResampleOptions& opt) {
  if (!mzi.uniform || !interf.uniform)
    throw std::invalid_argument("resample_calibrate: both signals must be uniform");
  const PhaseEstimate est = estimator(mzi);
  const Eigen::Index n = est.phase.size();
  if (n < 2) throw std::invalid_argument("resample_calibrate: estimator output too short");

  // phase -> absolute wavenumber via the registration anchor
  const ArrayX t = mzi.times.head(n);
  double phase_anchor;
  {
    double u = (opt.anchor_time - t[0]) * mzi.rate;
    u = std::min(std::max(u, 0.0), static_cast<double>(n - 1));
    const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(u), n - 2);
    const double frac = u - static_cast<double>(i);
    phase_anchor = est.phase[i] + frac * (est.phase[i + 1] - est.phase[i]);
  }
  ArrayX khat = opt.anchor_k + (est.phase - phase_anchor) / dl;

  const Interpolant phi(interf, opt.interp);
  std::vector<double> ks, vs;
  ks.reserve(static_cast<std::size_t>(ladder.count()));
  Eigen::Index skipped = 0;
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < ladder.count(); ++i) {
    const double level = ladder.levels[i];
    if (level < khat[0] || level > khat[n - 1]) {
      ++skipped;
      continue;
    }
    while (j + 1 < n && khat[j + 1] < level) ++j;
    double tl;
    if (opt.nearest_index) {
      tl = (level - khat[j] <= khat[j + 1] - level) ? t[j] : t[j + 1];
    } else {
      const double dk = khat[j + 1] - khat[j];
      const double frac = dk > 0.0 ? (level - khat[j]) / dk : 0.0;
      tl = t[j] + frac * (t[j + 1] - t[j]);
    }
    ks.push_back(level);
    vs.push_back(phi(tl));
  }
  if (ks.empty()) throw std::runtime_error("resample_calibrate: no ladder level inside the estimated span");

  CalibratedScan scan;
  scan.k_values = Eigen::Map<ArrayX>(ks.data(), static_cast<Eigen::Index>(ks.size()));
  scan.samples = Eigen::Map<ArrayX>(vs.data(), static_cast<Eigen::Index>(vs.size()));
  scan.method = "resampling";
  scan.osr = opt.osr;
  scan.interp = opt.interp;
  scan.estimator = opt.estimator_tag;
  return scan;
}

namespace {

std::vector<double> mzi_zero_crossings(const SampledSignal& mzi) {
  std::vector<double> times;
  const ArrayX& v = mzi.values;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if ((v[i - 1] < 0.0 && v[i] >= 0.0) || (v[i - 1] > 0.0 && v[i] <= 0.0)) {
      const double frac = v[i - 1] / (v[i - 1] - v[i]);
      times.push_back(mzi.times[i - 1] + frac * (mzi.times[i] - mzi.times[i - 1]));
    }
  }
  return times;
}

std::vector<double> mzi_extrema(const SampledSignal& mzi) {
  std::vector<double> times;
  const ArrayX& v = mzi.values;
  const double dt = 1.0 / mzi.rate;
  for (Eigen::Index i = 1; i + 1 < v.size(); ++i) {
    const double dl = v[i] - v[i - 1];
    const double dr = v[i + 1] - v[i];
    if ((dl > 0.0 && dr <= 0.0) || (dl < 0.0 && dr >= 0.0)) {
      // parabolic vertex through the three samples
      const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
      const double shift = denom != 0.0 ? 0.5 * (v[i - 1] - v[i + 1]) / denom : 0.0;
      times.push_back(mzi.times[i] + shift * dt);
    }
  }
  return times;
}

}  // namespace

CalibratedScan zero_crossing_calibrate(const SampledSignal& mzi,
                                       const SampledSignal& interf,
                                       ZeroCrossingMode mode, double dl) {
  if (!mzi.uniform || !interf.uniform)
    throw std::invalid_argument("zero_crossing_calibrate: both signals must be uniform");
  if (!(dl > 0.0)) throw std::invalid_argument("zero_crossing_calibrate: dl must be > 0");

  std::vector<double> events = mzi_zero_crossings(mzi);
  double dk = kPi / dl;
  if (mode == ZeroCrossingMode::Quadrature) {
    const std::vector<double> ext = mzi_extrema(mzi);
    events.insert(events.end(), ext.begin(), ext.end());
    std::sort(events.begin(), events.end());
    dk = kPi / (2.0 * dl);
  }
  if (events.size() < 8)
    throw std::runtime_error("zero_crossing_calibrate: fewer than 8 crossings");

  const Interpolant phi(interf, InterpKind::CubicSpline);
  CalibratedScan scan;
  const Eigen::Index m = static_cast<Eigen::Index>(events.size());
  scan.k_values = ArrayX::LinSpaced(m, 0.0, static_cast<double>(m - 1)) * dk;
  scan.samples.resize(m);
  for (Eigen::Index i = 0; i < m; ++i)
    scan.samples[i] = phi(events[static_cast<std::size_t>(i)]);
  scan.method = mode == ZeroCrossingMode::Basic ? "zero-crossing" : "zero-crossing-quad";
  return scan;
}

SampledSignal upsample_cubic(const SampledSignal& sig, int factor) {
  if (!sig.uniform || sig.size() < 2)
    throw std::invalid_argument("upsample_cubic: need a uniform signal with >= 2 samples");
  if (factor < 1) throw std::invalid_argument("upsample_cubic: factor must be >= 1");
  const Eigen::Index n = sig.size();
  const ArrayX& y = sig.values;
  ArrayX out((n - 1) * factor + 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double p0 = y[std::max<Eigen::Index>(i - 1, 0)];
    const double p1 = y[i];
    const double p2 = y[i + 1];
    const double p3 = y[std::min<Eigen::Index>(i + 2, n - 1)];
    for (int u = 0; u < factor; ++u) {
      const double s = static_cast<double>(u) / factor;
      out[i * factor + u] =
          0.5 * (2.0 * p1 + (-p0 + p2) * s + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s * s +
                 (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * s * s * s);
    }
  }
  out[(n - 1) * factor] = y[n - 1];
  return SampledSignal::make_uniform(sig.rate * factor, std::move(out), sig.times[0]);
}

CalibratedScan envelope_calibrate(const SweepProfile& profile,
                                  const ReflectivityProfile& refl,
                                  const SourceSpectrum& spec,
                                  const SampledSignal& mzi,
                                  const MziGeometry& geom,
                                  const EnvelopeCalibOptions& opt,
                                  const NoiseModel& sample_noise,
                                  const InterferogramOptions& iopt) {
  if (opt.m_c < 2) throw std::invalid_argument("envelope_calibrate: m_c must be >= 2");
  const EnvelopeResult env = envelope_equalize(mzi);
  SampledSignal up = upsample_cubic(env.equalized, opt.upsample);
  // undo the equalizer's path delay so event times refer to the input
  up.times -= opt.delay_samples / mzi.rate;
  const PhaseEstimate track = envelope_phase(up);

  // half-offset phase ladder over the interior of the track; the first
  // ~2 carrier cycles are the detector transient
  const Eigen::Index settle =
      std::min<Eigen::Index>(8 * opt.upsample, up.size() / 4);
  const double step = kTwoPi / static_cast<double>(opt.m_c);
  const double span = track.phase[up.size() - 1] - track.phase[settle];
  const double lo = track.phase[settle] + opt.margin * span;
  const double hi = track.phase[up.size() - 1] - opt.margin * span;
  const double j0 = std::ceil((lo - 0.5 * step) / step);
  const Eigen::Index m =
      static_cast<Eigen::Index>(std::floor((hi - 0.5 * step) / step - j0)) + 1;
  if (m < 2) throw std::runtime_error("envelope_calibrate: fewer than 2 events");
  LevelLadder phase_ladder =
      build_ladder((j0 + 0.5) * step, (j0 + 0.5 + static_cast<double>(m - 1)) * step, m);

  const CalibClock clock =
      find_crossings_sampled(up.times, track.phase, phase_ladder);

  CalibratedScan scan;
  scan.method = "envelope";
  scan.k_values.resize(clock.events.size());
  scan.samples.resize(clock.events.size());
  const ArrayX noise_v = gaussian_noise(clock.events.size(), sample_noise.sigma_w,
                                        sample_noise.seed, kStreamInterf);
  for (Eigen::Index i = 0; i < clock.events.size(); ++i) {
    const double t = std::min(std::max(clock.events[i], 0.0), profile.t_scan);
    scan.samples[i] = interferogram_value(profile, refl, spec, t, iopt) + noise_v[i];
    scan.k_values[i] =
        phase_ladder.levels[clock.level_index[static_cast<std::size_t>(i)]] / geom.dl;
  }
  return scan;
}

CalibratedScan dc_subtract(const CalibratedScan& scan,
                           const CalibratedScan& reference_scan) {
  if (scan.k_values.size() != reference_scan.k_values.size())
    throw std::invalid_argument("dc_subtract: grid length mismatch");
  const double tol = 1e-9 * std::max(1.0, scan.k_values.abs().maxCoeff());
  if (((scan.k_values - reference_scan.k_values).abs() > tol).any())
    throw std::invalid_argument("dc_subtract: grids do not match");
  CalibratedScan out = scan;
  out.samples -= reference_scan.samples;
  return out;
}

AScan reconstruct_ascan(const CalibratedScan& scan, Eigen::Index fft_len,
                        bool hann_window) {
  const Eigen::Index n = scan.samples.size();
  if (fft_len < n)
    throw std::invalid_argument("reconstruct_ascan: fft_len shorter than the scan");
  const double dk = scan.spacing();
  if (!(dk > 0.0)) throw std::invalid_argument("reconstruct_ascan: need >= 2 samples");
  for (Eigen::Index i = 1; i < n; ++i)
    if (std::abs((scan.k_values[i] - scan.k_values[i - 1]) - dk) > 1e-6 * dk)
      throw std::invalid_argument("reconstruct_ascan: k grid not equidistant");

  ComplexVec buf(static_cast<std::size_t>(fft_len), Complex(0, 0));
  for (Eigen::Index i = 0; i < n; ++i) {
    double w = 1.0;
    if (hann_window)
      w = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    buf[static_cast<std::size_t>(i)] = Complex(scan.samples[i] * w, 0.0);
  }
  buf = ifft(std::move(buf));

  AScan a;
  const Eigen::Index half = fft_len / 2;
  a.depth_axis = ArrayX::LinSpaced(half + 1, 0.0, static_cast<double>(half)) *
                 (kPi / (dk * static_cast<double>(fft_len)));
  a.magnitude.resize(half + 1);
  for (Eigen::Index i = 0; i <= half; ++i)
    a.magnitude[i] = std::abs(buf[static_cast<std::size_t>(i)]) *
                     static_cast<double>(fft_len);
  return a;
}

AScan reconstruct_uncalibrated(const SampledSignal& interf,
                               const SweepProfile& profile,
                               Eigen::Index fft_len) {
  CalibratedScan fake;
  fake.k_values = ArrayX::LinSpaced(interf.size(), profile.k_start(), profile.k_end());
  fake.samples = interf.values;
  fake.method = "uncalibrated";
  return reconstruct_ascan(fake, fft_len);
}

}  // namespace octcal
