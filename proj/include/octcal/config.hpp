#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "octcal/calib.hpp"

namespace octcal {

/// Fully-resolved run configuration. Defaults model the reference bench:
/// 1310 nm source with the bandwidth set for an 11.1 um axial resolution,
/// 150 kHz sweep, ~1 mm MZI path imbalance, 14-bit acquisition.
struct Config {
  // source
  double lambda0 = 1.31e-6;
  double dlambda = 0.0;  // 0 -> derived from target_lc
  double target_lc = 11.1e-6;

  // sweep: cubic s-curve covering span_dk_factor * source dk
  double t_scan = 1.0 / 150e3;
  double bend = 0.5;
  double span_dk_factor = 5.0;

  // geometry; dl is snapped so dl*k0 is a whole number of fringes, which
  // pins the MZI phase at the sweep trigger to zero
  double dl = 1e-3;
  double c_amp = 1.0;

  // reflectivity
  double r_ref = 1.0;
  double mirror_depth = 514e-6;
  double mirror_r = 1.0;

  // ladder
  Eigen::Index ladder_m = 1024;
  double ladder_margin = 0.05;
  int m_c = 0;  // when > 0, spacing = 2*pi/(m_c*dl) instead of ladder_m

  // adc
  int adc_bits = 14;
  double adc_rate = 2.5e8;
  double adc_full_scale = 2.0;

  // noise
  double sigma_w = 0.0;
  std::uint64_t seed = 1;

  // pipeline
  std::string method = "realtime";
  std::string interp = "cubic_spline";
  double osr = 8.0;

  // run
  Eigen::Index samples = 4096;
  int trials = 100;
  int threads = 0;  // 0 -> hardware concurrency

  static Config defaults();
  static Config from_file(const std::filesystem::path& path);
  /// Applies `section.key = value` pairs; unknown keys are an error.
  void apply(const std::string& section, const std::string& key,
             const std::string& value);

  double resolved_dlambda() const;
  SourceSpectrum spectrum() const;
  SweepProfile sweep() const;
  MziGeometry geometry() const;
  ReflectivityProfile reflectivity() const;
  LevelLadder ladder(const SweepProfile& profile) const;
  InterpKind interp_kind() const;

  /// Key-value echo of every resolved field, for summary.json.
  std::map<std::string, std::string> echo() const;
};

/// FWHM wavelength bandwidth giving coherence length `lc` at `lambda0`.
double delta_lambda_for_lc(double lambda0, double lc);

}  // namespace octcal
