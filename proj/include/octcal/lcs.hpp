#pragma once

#include <vector>

#include "octcal/signal.hpp"
#include "octcal/sweep.hpp"

namespace octcal {

/// Equidistant wavenumber levels K_linear.
struct LevelLadder {
  ArrayX levels;  // rad/m, strictly increasing, equal spacing
  double spacing() const { return levels.size() > 1 ? levels[1] - levels[0] : 0.0; }
  Eigen::Index count() const { return levels.size(); }
};

/// Nonuniform calibrating clock: the times at which k(t) crosses the ladder.
struct CalibClock {
  ArrayX events;                        // s, strictly increasing
  std::vector<Eigen::Index> level_index;
  Eigen::Index skipped = 0;             // levels outside the sweep span
};

struct LcsHardware {
  int bits = 10;              // Q
  double full_scale = 1.0;    // U, volts
  double max_event_rate = 5e9;  // f_s, events/s
  double loop_delay = 130e-12;  // s

  static LcsHardware make(int bits, double full_scale, double max_event_rate,
                          double loop_delay = 0.0);
  /// Preset from the 7.7 GHz loop-delay figure.
  static LcsHardware fast_preset();
  /// Conservative 5 GHz preset (default).
  static LcsHardware slow_preset();
};

/// M levels spanning [k_start, k_end] inclusive, spacing (k_end-k_start)/(M-1).
LevelLadder build_ladder(double k_start, double k_end, Eigen::Index M);

/// Ladder confined to the interior of the sweep: spans
/// [k0 + margin*span, k_end - margin*span].
LevelLadder interior_ladder(const SweepProfile& profile, Eigen::Index M,
                            double margin);

/// Crossing times of the analytic sweep, one event per in-span level;
/// out-of-span levels are counted as skipped.
CalibClock find_crossings(const SweepProfile& profile, const LevelLadder& ladder);

/// Dense-grid mode for estimator-driven ladders: crossing times of a sampled
/// monotone k(t) found by local linear interpolation.
CalibClock find_crossings_sampled(const ArrayX& times, const ArrayX& k_samples,
                                  const LevelLadder& ladder);

struct RateReport {
  Eigen::Index violations = 0;  // consecutive events closer than 1/f_s
  double min_spacing = 0.0;     // s
  double slew_rate_bound = 0.0; // U*f_s/2^Q, V/s
  bool slew_ok = true;          // bound vs the supplied input slope
};

/// Flags event pairs the hardware cannot fire and checks the slew-rate bound
/// against a given analog input slope (V/s).
RateReport check_rate(const CalibClock& clock, const LcsHardware& hw,
                      double input_slope = 0.0);

/// Energy per conversion, power/(2^ENOB * 2 * BW).
double fom(double power_w, double enob, double bw_hz);

/// Path skew: T_delay_calibrating - T_delay_interferometric. Positive means
/// the calibrating path is slower.
double estimate_skew(double trigger_time, double t_delay_calibrating,
                     double t_delay_interferometric);

struct LmsResult {
  LevelLadder adjusted;
  std::vector<double> residual_trace;  // max |timing error| per iteration, s
  Eigen::Index iterations = 0;
  bool converged = false;
};

/// LMS adaptation of the ladder so each adjusted level fires `true_skew`
/// earlier/later than the nominal level: invert(k'_n) = invert(k_n) + skew.
/// Steps are normalized by the local sweep slope; converged when the largest
/// residual drops below 1 ps.
LmsResult lms_adapt(const SweepProfile& profile, const LevelLadder& ladder,
                    double true_skew, double step_mu, int iters);

}  // namespace octcal
