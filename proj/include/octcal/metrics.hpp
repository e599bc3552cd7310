#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "octcal/calib.hpp"

namespace octcal {

/// Width of the dominant A-scan peak at half its magnitude, sub-bin by
/// linear interpolation of the two half crossings. `peak_hint`, when given,
/// selects the local peak nearest that depth. Requires the peak to stand
/// at least 10x above the median background.
double fwhm(const AScan& ascan, std::optional<double> peak_hint = std::nullopt);

/// Mean squared difference; lengths must match.
double mse(const CalibratedScan& a, const CalibratedScan& b);
double mse(const ArrayX& a, const ArrayX& b);

/// Closed-form real-time MSE under phase error: (1/2) * r_prod * sigma_k^2.
double predicted_mse(double sigma_k_sq, double r_prod);

/// (mse_resampling - mse_realtime)/mse_resampling * 100.
double mse_improvement(double mse_resampling, double mse_realtime);

/// f_sample = 4*sqrt(ln 2)*(N/pi)*(z_max/l_c); equals M*N with
/// M = ladder size matching that resolution/depth pair.
double tradeoff(double l_c, double ascan_rate, double z_max);

struct RolloffPoint {
  double depth = 0.0;
  double peak_db = 0.0;  // relative to the shallowest depth
};

struct RolloffCurve {
  std::vector<RolloffPoint> points;
  double depth_6db = 0.0;  // interpolated -6 dB crossing; 0 when not reached
};

/// Normalizes peak magnitudes to the first depth and locates the -6 dB
/// crossing by linear interpolation on the dB curve.
RolloffCurve rolloff_from_peaks(const std::vector<double>& depths,
                                const std::vector<double>& peaks);

/// One aggregate cell of a study: identifiers -> per-trial values + stats.
struct MetricsCell {
  std::map<std::string, std::string> id;
  std::vector<double> values;
  double mean = 0.0;
  double stddev = 0.0;
  bool flagged = false;
  std::string note;
};

struct MetricsReport {
  std::string name;
  std::vector<MetricsCell> cells;

  static MetricsCell aggregate(std::map<std::string, std::string> id,
                               std::vector<double> values);
};

}  // namespace octcal
