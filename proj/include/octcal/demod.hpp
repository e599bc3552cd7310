#pragma once

#include <string>
#include <vector>

#include "octcal/signal.hpp"

namespace octcal {

/// Result of any instantaneous-phase estimator. `phase` is unwrapped and, for
/// a monotone sweep, nondecreasing. Block-based estimators also expose their
/// per-block frequency/decay parameters.
struct PhaseEstimate {
  ArrayX phase;      // rad, same length as input for sample-wise estimators
  ArrayX amplitude;  // empty when the estimator does not produce one
  struct Block {
    Eigen::Index start = 0;
    double omega0 = 0.0;  // rad/sample
    double d = 0.0;       // decay per sample
  };
  std::vector<Block> blocks;
};

/// Greedy 2*pi-jump correction on successive wrapped samples. Requires the
/// underlying phase to advance by less than pi per sample.
ArrayX unwrap_phase(const ArrayX& wrapped);

/// Analytic-signal estimator: full-length FFT, negative frequencies zeroed,
/// inverse FFT, atan2 + unwrap. The baseline every other estimator is
/// compared against.
PhaseEstimate hilbert_phase(const SampledSignal& mzi);

struct EnvelopeResult {
  SampledSignal equalized;
  SampledSignal envelope;
  bool low_signal = false;  // envelope below guard on >1% of samples
};

/// Square-law envelope detector: square, 4-tap moving average, x2, square
/// root. The equalized output divides the 4-sample-delayed input by the
/// envelope (guarded by 1e-3 of its peak). The first ~8 samples are filter
/// transient. Designed for carriers near 4 samples/cycle, where the moving
/// average nulls the doubled-frequency term.
EnvelopeResult envelope_equalize(const SampledSignal& mzi);

/// Dense phase read off an amplitude-equalized signal by branch-tracked
/// arccos; feeds the level-crossing clock of the envelope pipeline.
PhaseEstimate envelope_phase(const SampledSignal& equalized);

struct EkfParams {
  double sigma_na = 1e-6;  // amplitude random-walk std
  double sigma_nk = 1e-8;  // phase-model noise std
  double sigma_w = 1e-2;   // measurement noise std
  Eigen::Matrix<double, 5, 1> x0 =
      Eigen::Matrix<double, 5, 1>::Zero();  // [A, k, k', k'', k''']
  // Initial covariance diagonal. Identity matches the stated recursion, but
  // the derivative states live at ~1e-1/1e-4/1e-8 rad per sample^i, so unit
  // prior variance there lets early noise slew the cubic extrapolation into
  // lock loss; scale these to the actual x0 uncertainty.
  Eigen::Matrix<double, 5, 1> p0_diag = Eigen::Matrix<double, 5, 1>::Ones();
};

/// 5-state extended Kalman filter tracking amplitude and instantaneous
/// phase with a 3rd-order Taylor phase model. `covariance_trace`, when
/// given, receives the posterior covariance at every step.
PhaseEstimate ekf_estimate(const SampledSignal& mzi, const EkfParams& p,
                           std::vector<Eigen::Matrix<double, 5, 5>>* covariance_trace = nullptr);

struct UkfParams {
  double alpha = 1e-2;
  double beta = 2.0;
  double kappa = 0.0;
  double sigma_a = 1e-6;                    // amplitude process std
  Eigen::Vector3d sigma_poly{0.0, 0.0, 0.0};  // process std of [a3, a2, a1]
  double sigma_w = 1e-2;
  // x0 = [A, a3, a2, a1]; polynomial coefficients of phase(t) in seconds
  Eigen::Matrix<double, 4, 1> x0 = Eigen::Matrix<double, 4, 1>::Zero();
  // Initial covariance diagonal in the filter's normalized-time units.
  Eigen::Matrix<double, 4, 1> p0_diag = Eigen::Matrix<double, 4, 1>::Ones();
};

/// 4-state scaled unscented Kalman filter estimating the cubic phase-law
/// coefficients directly; 2L+1 sigma points, lower-triangular Cholesky.
/// `state_trace`, when given, receives one row [A, a3, a2, a1] per sample
/// in seconds units.
PhaseEstimate ukf_estimate(const SampledSignal& mzi, const UkfParams& p,
                           MatrixX* state_trace = nullptr);

enum class WindowKind { Rectangular, RvciOrderO, Hann, Hamming };
enum class IpdftMethod { BY2, RVCI };

struct IpdftParams {
  Eigen::Index block_len = 32;  // P, power of two >= 8
  WindowKind window = WindowKind::Rectangular;
  int order = 0;  // O, RVCI window order
  IpdftMethod method = IpdftMethod::BY2;
};

/// Per-block interpolated-DFT estimator. BY-2 inverts the ratio of 3-bin
/// second differences around the peak bin (branch picked by the larger
/// neighbor); RVCI uses squared-magnitude neighbor ratios of an order-O
/// cosine-sum windowed DFT. Phase is reconstructed by integrating the
/// piecewise-constant per-block frequency, continuous at block joins.
PhaseEstimate ipdft_estimate(const SampledSignal& mzi, const IpdftParams& p);

/// Window coefficients, unit peak. RVCI order O is sin(pi*n/P)^(2O)
/// (binomial cosine-sum); order 1 is the Hann window.
ArrayX window_gen(WindowKind kind, Eigen::Index P, int order = 0);

struct OpCountReport {
  double adds = 0.0;
  double mults = 0.0;
  double total = 0.0;
  double latency = 0.0;
};

enum class CountMethod { HilbertFir, Ipdft };

/// Closed-form arithmetic counts: Hilbert FIR of order H over L samples,
/// or split-radix IpDFT with block length P over L samples.
OpCountReport count_ops(CountMethod method, Eigen::Index H, Eigen::Index L,
                        Eigen::Index P);

}  // namespace octcal
