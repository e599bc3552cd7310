#include "octcal/lcs.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace octcal {

LcsHardware LcsHardware::make(int bits, double full_scale, double max_event_rate,
                              double loop_delay) {
  if (bits < 1) throw std::invalid_argument("LcsHardware: bits must be >= 1");
  if (!(max_event_rate > 0.0))
    throw std::invalid_argument("LcsHardware: max_event_rate must be > 0");
  return LcsHardware{bits, full_scale, max_event_rate, loop_delay};
}

LcsHardware LcsHardware::fast_preset() { return make(10, 1.0, 7.7e9, 130e-12); }
LcsHardware LcsHardware::slow_preset() { return make(10, 1.0, 5.0e9, 200e-12); }

LevelLadder build_ladder(double k_start, double k_end, Eigen::Index M) {
  if (M < 2) throw std::domain_error("build_ladder: need at least 2 levels");
  if (!(k_end > k_start)) throw std::domain_error("build_ladder: k_end must exceed k_start");
  LevelLadder l;
  l.levels = ArrayX::LinSpaced(M, k_start, k_end);
  return l;
}

LevelLadder interior_ladder(const SweepProfile& profile, Eigen::Index M,
                            double margin) {
  if (margin < 0.0 || margin >= 0.5)
    throw std::invalid_argument("interior_ladder: margin must be in [0, 0.5)");
  const double span = profile.span();
  return build_ladder(profile.k_start() + margin * span,
                      profile.k_end() - margin * span, M);
}

CalibClock find_crossings(const SweepProfile& profile, const LevelLadder& ladder) {
  CalibClock clock;
  std::vector<double> events;
  events.reserve(static_cast<std::size_t>(ladder.count()));
  const double klo = profile.k_start(), khi = profile.k_end();
  for (Eigen::Index i = 0; i < ladder.count(); ++i) {
    const double level = ladder.levels[i];
    if (level < klo || level > khi) {
      ++clock.skipped;
      continue;
    }
    events.push_back(profile.invert(level));
    clock.level_index.push_back(i);
  }
  clock.events = Eigen::Map<ArrayX>(events.data(), static_cast<Eigen::Index>(events.size()));
  return clock;
}

CalibClock find_crossings_sampled(const ArrayX& times, const ArrayX& k_samples,
                                  const LevelLadder& ladder) {
  if (times.size() != k_samples.size() || times.size() < 2)
    throw std::invalid_argument("find_crossings_sampled: bad sampled sweep");
  CalibClock clock;
  std::vector<double> events;
  Eigen::Index j = 0;  // sample cursor; ladder and k both ascend
  for (Eigen::Index i = 0; i < ladder.count(); ++i) {
    const double level = ladder.levels[i];
    if (level < k_samples[0] || level > k_samples[k_samples.size() - 1]) {
      ++clock.skipped;
      continue;
    }
    while (j + 1 < k_samples.size() && k_samples[j + 1] < level) ++j;
    // level lies in [k[j], k[j+1]]
    const double dk = k_samples[j + 1] - k_samples[j];
    const double frac = dk > 0.0 ? (level - k_samples[j]) / dk : 0.0;
    events.push_back(times[j] + frac * (times[j + 1] - times[j]));
    clock.level_index.push_back(i);
  }
  clock.events = Eigen::Map<ArrayX>(events.data(), static_cast<Eigen::Index>(events.size()));
  return clock;
}

RateReport check_rate(const CalibClock& clock, const LcsHardware& hw,
                      double input_slope) {
  RateReport rep;
  rep.min_spacing = std::numeric_limits<double>::infinity();
  const double period = 1.0 / hw.max_event_rate;
  for (Eigen::Index i = 1; i < clock.events.size(); ++i) {
    const double dt = clock.events[i] - clock.events[i - 1];
    rep.min_spacing = std::min(rep.min_spacing, dt);
    if (dt < period * (1.0 - 1e-12)) ++rep.violations;  // equality passes
  }
  rep.slew_rate_bound = hw.full_scale * hw.max_event_rate /
                        static_cast<double>(1LL << hw.bits);
  rep.slew_ok = input_slope <= rep.slew_rate_bound;
  return rep;
}

double fom(double power_w, double enob, double bw_hz) {
  if (!(power_w > 0.0) || !(enob > 0.0) || !(bw_hz > 0.0))
    throw std::invalid_argument("fom: arguments must be positive");
  return power_w / (std::pow(2.0, enob) * 2.0 * bw_hz);
}

double estimate_skew(double /*trigger_time*/, double t_delay_calibrating,
                     double t_delay_interferometric) {
  if (t_delay_calibrating < 0.0 || t_delay_interferometric < 0.0)
    throw std::invalid_argument("estimate_skew: delays must be >= 0");
  return t_delay_calibrating - t_delay_interferometric;
}

LmsResult lms_adapt(const SweepProfile& profile, const LevelLadder& ladder,
                    double true_skew, double step_mu, int iters) {
  if (!(step_mu > 0.0)) throw std::invalid_argument("lms_adapt: step_mu must be > 0");
  constexpr double kTolSeconds = 1e-12;  // 1 ps
  LmsResult res;
  res.adjusted = ladder;
  ArrayX target(ladder.count());
  for (Eigen::Index i = 0; i < ladder.count(); ++i)
    target[i] = profile.invert(ladder.levels[i]) + true_skew;
  if (target[0] < 0.0 || target[ladder.count() - 1] > profile.t_scan)
    throw std::domain_error("lms_adapt: skew pushes events outside the sweep");

  for (int it = 0; it <= iters; ++it) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < ladder.count(); ++i) {
      const double t = profile.invert(res.adjusted.levels[i]);
      worst = std::max(worst, std::abs(t - target[i]));
    }
    res.residual_trace.push_back(worst);
    res.iterations = it;
    if (worst < kTolSeconds) {
      res.converged = true;
      return res;
    }
    if (it == iters) break;
    for (Eigen::Index i = 0; i < ladder.count(); ++i) {
      const double t = profile.invert(res.adjusted.levels[i]);
      const double err = target[i] - t;  // seconds
      // timing error scaled to a wavenumber step by the local slope
      res.adjusted.levels[i] += step_mu * err * profile.slope(t);
    }
  }
  throw std::runtime_error("lms_adapt: no convergence after " +
                           std::to_string(iters) + " iterations; residual " +
                           std::to_string(res.residual_trace.back()));
}

}  // namespace octcal
