#include "octcal/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "octcal/rng.hpp"

namespace octcal {

SampledSignal SampledSignal::make_uniform(double rate, ArrayX values, double t0) {
  if (!(rate > 0.0)) throw std::invalid_argument("SampledSignal: rate must be > 0");
  SampledSignal s;
  const Eigen::Index n = values.size();
  s.times = t0 + ArrayX::LinSpaced(n, 0.0, static_cast<double>(n - 1)) / rate;
  s.values = std::move(values);
  s.uniform = true;
  s.rate = rate;
  return s;
}

SampledSignal SampledSignal::make(ArrayX times, ArrayX values) {
  if (times.size() != values.size())
    throw std::invalid_argument("SampledSignal: times/values length mismatch");
  for (Eigen::Index i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("SampledSignal: times must be strictly increasing");
  SampledSignal s;
  s.times = std::move(times);
  s.values = std::move(values);
  s.uniform = false;
  s.rate = 0.0;
  return s;
}

ArrayX uniform_grid(double t_total, Eigen::Index n) {
  if (!(t_total > 0.0) || n < 1) throw std::invalid_argument("uniform_grid: bad arguments");
  return ArrayX::LinSpaced(n, 0.0, static_cast<double>(n - 1)) *
         (t_total / static_cast<double>(n));
}

NoiseModel NoiseModel::make(double sigma_w, std::uint64_t seed) {
  if (sigma_w < 0.0) throw std::invalid_argument("NoiseModel: sigma_w must be >= 0");
  return NoiseModel{sigma_w, seed};
}

AdcModel AdcModel::make(int bits, double full_scale, double rate) {
  if (bits < 1 || bits > 24) throw std::invalid_argument("AdcModel: need 1 <= bits <= 24");
  if (!(full_scale > 0.0)) throw std::invalid_argument("AdcModel: full_scale must be > 0");
  return AdcModel{bits, full_scale, rate};
}

namespace {

void check_grid(const SweepProfile& profile, const ArrayX& grid) {
  if (grid.size() == 0) throw std::domain_error("synth: empty time grid");
  if (grid[0] < 0.0 || grid[grid.size() - 1] > profile.t_scan)
    throw std::domain_error("synth: grid outside [0, t_scan]");
}

}  // namespace

double mzi_value(const SweepProfile& profile, const MziGeometry& geom,
                 const SourceSpectrum& spec, double t) {
  const double k = profile.eval(t);
  return geom.c_amp * spec.peak_normalized(k) * std::cos(geom.dl * k);
}

SampledSignal synth_mzi(const SweepProfile& profile, const MziGeometry& geom,
                        const SourceSpectrum& spec, const ArrayX& grid,
                        const NoiseModel& noise) {
  check_grid(profile, grid);
  ArrayX v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    v[i] = mzi_value(profile, geom, spec, grid[i]);
  v += gaussian_noise(grid.size(), noise.sigma_w, noise.seed, kStreamMzi);
  const double dt = grid.size() > 1 ? grid[1] - grid[0] : 1.0;
  return SampledSignal::make_uniform(1.0 / dt, std::move(v), grid[0]);
}

double interferogram_value(const SweepProfile& profile,
                           const ReflectivityProfile& refl,
                           const SourceSpectrum& spec, double t,
                           const InterferogramOptions& opt) {
  const double k = profile.eval(t);
  const double s = spec.peak_normalized(k);

  auto depth_at = [&](const Reflector& rf) {
    const double z = refl.z_ref - perturb_depth(rf.z, opt.perturb_amp, opt.perturb_omega, t);
    return z;
  };
  auto rolloff = [&](double z) {
    if (opt.rolloff_dr_k <= 0.0) return 1.0;
    const double a = opt.rolloff_dr_k * z;
    return std::exp(-a * a / (4.0 * kLn2));
  };

  double dc = refl.r_ref;
  double cross = 0.0;
  for (const auto& rf : refl.reflectors) {
    dc += rf.r;
    const double z = depth_at(rf);
    cross += std::sqrt(refl.r_ref * rf.r) * rolloff(z) * std::cos(2.0 * k * z);
  }
  double autoc = 0.0;
  if (opt.include_auto) {
    for (std::size_t i = 0; i < refl.reflectors.size(); ++i)
      for (std::size_t j = i + 1; j < refl.reflectors.size(); ++j) {
        const double dz = depth_at(refl.reflectors[i]) - depth_at(refl.reflectors[j]);
        autoc += std::sqrt(refl.reflectors[i].r * refl.reflectors[j].r) *
                 rolloff(dz) * std::cos(2.0 * k * dz);
      }
  }
  // unordered pairs carry weight 1 = 2 * (rho/2) from the ordered sum
  return s * (0.25 * dc + 0.5 * cross + autoc);
}

SampledSignal synth_interferogram(const SweepProfile& profile,
                                  const ReflectivityProfile& refl,
                                  const SourceSpectrum& spec, const ArrayX& grid,
                                  const NoiseModel& noise,
                                  const InterferogramOptions& opt) {
  check_grid(profile, grid);
  ArrayX v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    v[i] = interferogram_value(profile, refl, spec, grid[i], opt);
  v += gaussian_noise(grid.size(), noise.sigma_w, noise.seed, kStreamInterf);
  bool uniform = grid.size() > 1;
  const double dt = grid.size() > 1 ? grid[1] - grid[0] : 1.0;
  for (Eigen::Index i = 2; i < grid.size() && uniform; ++i)
    uniform = std::abs((grid[i] - grid[i - 1]) - dt) <= 1e-9 * dt;
  if (uniform && grid.size() > 1)
    return SampledSignal::make_uniform(1.0 / dt, std::move(v), grid[0]);
  return SampledSignal::make(grid, std::move(v));
}

QuantizeResult quantize(const SampledSignal& sig, const AdcModel& adc) {
  const double lsb = adc.lsb();
  const double half = 0.5 * adc.full_scale;
  const double top = half - 0.5 * lsb;    // highest mid-rise level
  const double bottom = -half + 0.5 * lsb;
  QuantizeResult out;
  out.signal = sig;
  for (Eigen::Index i = 0; i < sig.values.size(); ++i) {
    const double x = sig.values[i];
    if (x > half || x < -half) ++out.clipped;
    double q = (std::floor(x / lsb) + 0.5) * lsb;
    q = std::min(std::max(q, bottom), top);
    out.signal.values[i] = q;
  }
  return out;
}

double perturb_depth(double z_nominal, double amp, double omega_z, double t) {
  if (amp < 0.0) throw std::invalid_argument("perturb_depth: amp must be >= 0");
  if (amp == 0.0) return z_nominal;
  return z_nominal + amp * std::sin(omega_z * t);
}

}  // namespace octcal
