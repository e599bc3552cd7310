#include "octcal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace octcal {

namespace {

double median(ArrayX v) {
  std::sort(v.data(), v.data() + v.size());
  const Eigen::Index n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double fwhm(const AScan& ascan, std::optional<double> peak_hint) {
  const ArrayX& m = ascan.magnitude;
  const Eigen::Index n = m.size();
  if (n < 3) throw std::invalid_argument("fwhm: A-scan too short");

  Eigen::Index peak = 0;
  if (peak_hint) {
    // nearest local maximum to the hinted depth
    const double dz = ascan.depth_axis[1] - ascan.depth_axis[0];
    Eigen::Index i0 = static_cast<Eigen::Index>(std::round(*peak_hint / dz));
    i0 = std::min(std::max<Eigen::Index>(i0, 1), n - 2);
    Eigen::Index best = -1;
    for (Eigen::Index r = 0; r < n; ++r) {
      for (const Eigen::Index i : {i0 - r, i0 + r}) {
        if (i < 1 || i > n - 2) continue;
        if (m[i] >= m[i - 1] && m[i] >= m[i + 1]) {
          best = i;
          break;
        }
      }
      if (best >= 0) break;
    }
    if (best < 0) throw std::runtime_error("fwhm: no local peak near hint");
    peak = best;
  } else {
    m.maxCoeff(&peak);
  }

  const double peak_mag = m[peak];
  if (!(peak_mag > 10.0 * std::max(median(m), 1e-300)))
    throw std::runtime_error("fwhm: no dominant peak (10x median background)");

  const double half = 0.5 * peak_mag;
  Eigen::Index l = peak;
  while (l > 0 && m[l] > half) --l;
  Eigen::Index r = peak;
  while (r < n - 1 && m[r] > half) ++r;
  if (m[l] > half || m[r] > half)
    throw std::runtime_error("fwhm: half level not crossed inside the axis");

  auto cross = [&](Eigen::Index a, Eigen::Index b) {
    // linear interpolation of the crossing between samples a (below) and b
    const double frac = (half - m[a]) / (m[b] - m[a]);
    return ascan.depth_axis[a] + frac * (ascan.depth_axis[b] - ascan.depth_axis[a]);
  };
  const double zl = cross(l, l + 1);
  const double zr = cross(r, r - 1);
  return zr - zl;
}

double mse(const ArrayX& a, const ArrayX& b) {
  if (a.size() != b.size()) throw std::invalid_argument("mse: length mismatch");
  if (a.size() == 0) throw std::invalid_argument("mse: empty input");
  return (a - b).square().mean();
}

double mse(const CalibratedScan& a, const CalibratedScan& b) {
  return mse(a.samples, b.samples);
}

double predicted_mse(double sigma_k_sq, double r_prod) {
  if (sigma_k_sq < 0.0 || r_prod < 0.0)
    throw std::invalid_argument("predicted_mse: arguments must be >= 0");
  return 0.5 * r_prod * sigma_k_sq;
}

double mse_improvement(double mse_resampling, double mse_realtime) {
  if (!(mse_resampling > 0.0))
    throw std::domain_error("mse_improvement: resampling MSE must be > 0");
  return (mse_resampling - mse_realtime) / mse_resampling * 100.0;
}

double tradeoff(double l_c, double ascan_rate, double z_max) {
  if (!(l_c > 0.0) || !(ascan_rate > 0.0) || !(z_max > 0.0))
    throw std::invalid_argument("tradeoff: arguments must be positive");
  return 4.0 * std::sqrt(kLn2) * (ascan_rate / kPi) * (z_max / l_c);
}

RolloffCurve rolloff_from_peaks(const std::vector<double>& depths,
                                const std::vector<double>& peaks) {
  if (depths.size() != peaks.size() || depths.empty())
    throw std::invalid_argument("rolloff_from_peaks: bad inputs");
  RolloffCurve curve;
  const double ref = peaks.front();
  for (std::size_t i = 0; i < depths.size(); ++i)
    curve.points.push_back({depths[i], 20.0 * std::log10(peaks[i] / ref)});
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    if (a.peak_db >= -6.0 && b.peak_db < -6.0) {
      const double frac = (-6.0 - a.peak_db) / (b.peak_db - a.peak_db);
      curve.depth_6db = a.depth + frac * (b.depth - a.depth);
      break;
    }
  }
  return curve;
}

MetricsCell MetricsReport::aggregate(std::map<std::string, std::string> id,
                                     std::vector<double> values) {
  MetricsCell c;
  c.id = std::move(id);
  c.values = std::move(values);
  if (!c.values.empty()) {
    double s = 0.0;
    for (double v : c.values) s += v;
    c.mean = s / static_cast<double>(c.values.size());
    double ss = 0.0;
    for (double v : c.values) ss += (v - c.mean) * (v - c.mean);
    c.stddev = c.values.size() > 1
                   ? std::sqrt(ss / static_cast<double>(c.values.size() - 1))
                   : 0.0;
  }
  return c;
}

}  // namespace octcal
