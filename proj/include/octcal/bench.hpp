#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "octcal/config.hpp"
#include "octcal/metrics.hpp"

namespace octcal {

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentResult {
  std::string name;
  std::string manifest_hash;
  std::map<std::string, std::string> manifest;
  MetricsReport report;
  std::vector<Assertion> assertions;
  // named plot series rendered by write_outputs
  struct Series {
    std::string title, x_label, y_label;
    ArrayX x, y;
  };
  std::vector<Series> plots;

  bool all_pass() const;
};

/// FNV-1a over the sorted manifest, hex encoded; equal manifests rerun to
/// byte-identical reports.
std::string manifest_hash(const std::map<std::string, std::string>& manifest);

/// Axial-resolution grid, depths x M_C x {envelope, hilbert}; asserts every
/// cell within 15% of the source coherence length, inter-cell flatness, and
/// envelope/Hilbert parity.
ExperimentResult run_table31(const Config& cfg, int trials);

/// MSE of the estimated MZI argument for EKF vs Hilbert over an SNR grid on
/// an amplitude-normalized chirp, plus the calibrated-interferogram MSE at
/// three mirror depths. Asserts MSE_k(EKF) <= 0.1 * MSE_k(Hilbert) everywhere.
ExperimentResult run_noise_sweep(const Config& cfg, std::vector<double> snr_db,
                                 int trials);

/// Resampling MSE surface over (OSR, ADC2 bits, interpolation kind) against
/// the ideal event-sampled reference, plus the real-time line vs bits only.
/// bits = 0 denotes the unquantized interpolation study.
ExperimentResult run_osr_surface(const Config& cfg, std::vector<double> osr_grid,
                                 std::vector<int> bits_grid,
                                 std::vector<InterpKind> interps);

/// Median wall times of the four demodulators across signal lengths;
/// asserts UKF <= EKF and IpDFT(P=32) <= Hilbert at L >= 4096. Also emits
/// the closed-form arithmetic-count table.
ExperimentResult run_timing(const Config& cfg, std::vector<Eigen::Index> lengths,
                            int repeats);

/// Sensitivity roll-off with a finite instantaneous linewidth modeled
/// exactly; asserts the measured -6 dB depth against 2 ln2/delta_r_k.
ExperimentResult run_rolloff(const Config& cfg, std::vector<double> depths,
                             double dr_lambda);

/// Clock fidelity and LMS skew adaptation; asserts every event matches its
/// level to 1e-12 of the sweep span and that residual timing error falls
/// below 1 ps within the iteration budget for every injected skew.
ExperimentResult run_skew(const Config& cfg, std::vector<double> skews,
                          double step_mu, int iters);

/// out_root/<name>/<hash>/{report.csv, summary.json, plots/*.svg}
std::filesystem::path write_outputs(const ExperimentResult& result,
                                    const std::filesystem::path& out_root);

/// Estimator factory for the calibrate command and the benches. Kalman
/// estimators are seeded from the nominal sweep law; the amplitude start
/// comes from the data.
Estimator make_estimator(const std::string& name, const Config& cfg,
                         const SweepProfile& profile, const MziGeometry& geom,
                         double assumed_sigma_w);

EkfParams ekf_params_for(const Config& cfg, const SweepProfile& profile,
                         const MziGeometry& geom, double rate, double amp0,
                         double sigma_w);
UkfParams ukf_params_for(const Config& cfg, const SweepProfile& profile,
                         const MziGeometry& geom, double amp0, double sigma_w);

}  // namespace octcal
