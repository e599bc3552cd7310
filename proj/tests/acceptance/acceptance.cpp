// Acceptance suite: one criterion per invocation, one PASS/FAIL line each.
// Exit codes: 0 all pass, 2 any fail, 1 usage/internal error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "octcal/bench.hpp"
#include "octcal/fft.hpp"
#include "octcal/io.hpp"
#include "octcal/rng.hpp"

using namespace octcal;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome from_assertions(const ExperimentResult& r, double elapsed_s, double budget_s) {
  Outcome o;
  std::string msg;
  for (const auto& a : r.assertions) {
    if (!a.pass) {
      o.pass = false;
      msg += a.name + (a.detail.empty() ? "" : " [" + a.detail + "]") + "; ";
    }
  }
  if (budget_s > 0.0 && elapsed_s > budget_s) {
    o.pass = false;
    msg += "runtime " + std::to_string(elapsed_s) + " s over budget; ";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f s", elapsed_s);
  o.detail = msg.empty() ? std::string(buf) : msg + buf;
  return o;
}

// 1. axial-resolution reproduction, 18 cells within 15% of 11.1 um
Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Config cfg = Config::defaults();
  const ExperimentResult r = run_table31(cfg, 100);
  return from_assertions(r, seconds_since(t0), 300.0);
}

// 2. calibration necessity: uncalibrated FWHM at 1481 um at least 3x wider
Outcome criterion2() {
  Config cfg = Config::defaults();
  const SourceSpectrum spec = cfg.spectrum();
  const double depth = 1481e-6;

  // monotone-slope cubic: a symmetric S-curve has a stationary point of the
  // slope mid-scan, which focuses the uncalibrated energy into a caustic
  // instead of smearing it; a ramped slope is what the blur claim is about
  const double q2 = 0.3, q3 = 0.1;
  const double T = cfg.t_scan;
  const double span = 5.0 * spec.dk;
  const double a1 = span / (T * (1.0 + q2 + q3));
  const SweepProfile profile =
      SweepProfile::cubic(spec.k_center - span / 2, a1, q2 * a1 / T,
                          q3 * a1 / (T * T), T);

  // the stated nonlinearity bound holds
  const double nl = std::abs(profile.a2) * T * T / (profile.a1 * T);
  if (nl < 0.2) return {false, "sweep nonlinearity below the stated bound"};

  const auto refl = ReflectivityProfile::mirror(depth);
  const auto ref_only = ReflectivityProfile::make(1.0, 0.0, {});

  const LevelLadder ladder = cfg.ladder(profile);
  const CalibClock clock = find_crossings(profile, ladder);
  const auto scan = realtime_calibrate(profile, refl, spec, ladder, clock, NoiseModel::off());
  const auto ref = realtime_calibrate(profile, ref_only, spec, ladder, clock, NoiseModel::off());
  const double w_cal = fwhm(reconstruct_ascan(dc_subtract(scan, ref), 8192), depth);

  const ArrayX grid = uniform_grid(profile.t_scan, cfg.samples);
  SampledSignal interf = synth_interferogram(profile, refl, spec, grid, NoiseModel::off());
  const SampledSignal iref = synth_interferogram(profile, ref_only, spec, grid, NoiseModel::off());
  interf.values -= iref.values;
  const AScan blur = reconstruct_uncalibrated(interf, profile, 8192);

  // measure the smeared lobe: widest half-max extent around the global peak
  // beyond the DC region
  const double dz = blur.depth_axis[1] - blur.depth_axis[0];
  const Eigen::Index start = static_cast<Eigen::Index>(0.2e-3 / dz);
  Eigen::Index pk = start;
  for (Eigen::Index i = start; i < blur.magnitude.size(); ++i)
    if (blur.magnitude[i] > blur.magnitude[pk]) pk = i;
  const double half = 0.5 * blur.magnitude[pk];
  Eigen::Index l = pk, rgt = pk;
  while (l > start && blur.magnitude[l] > half) --l;
  while (rgt < blur.magnitude.size() - 1 && blur.magnitude[rgt] > half) ++rgt;
  const double w_uncal = blur.depth_axis[rgt] - blur.depth_axis[l];

  char buf[160];
  std::snprintf(buf, sizeof(buf), "calibrated %.2f um, uncalibrated %.2f um, ratio %.1f",
                w_cal * 1e6, w_uncal * 1e6, w_uncal / w_cal);
  return {w_uncal >= 3.0 * w_cal, buf};
}

// 3. EKF superiority over the SNR grid
Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  Config cfg = Config::defaults();
  const ExperimentResult r = run_noise_sweep(cfg, {10, 15, 20, 25, 30}, 50);
  return from_assertions(r, seconds_since(t0), 180.0);
}

// 4. Monte-Carlo MSE vs the (1/2) R_R R_S sigma_k^2 closed form
Outcome criterion4() {
  Config cfg = Config::defaults();
  const SweepProfile profile = cfg.sweep();
  const LevelLadder ladder = cfg.ladder(profile);
  const double depth = 700e-6, r_ref = 1.0, r_s = 0.64;
  const double amp = std::sqrt(r_ref * r_s);

  Outcome o;
  std::string detail;
  for (const double s2 : {1e-6, 1e-4, 1e-2}) {
    const double s = std::sqrt(s2);
    double acc = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      const CounterRng rng{derive_seed(cfg.seed, static_cast<std::uint64_t>(t)), kStreamPhase};
      double sum = 0.0;
      for (Eigen::Index i = 0; i < ladder.count(); ++i) {
        const double theta = 2.0 * ladder.levels[i] * depth;
        const double eps = s * rng.gaussian(static_cast<std::uint64_t>(i));
        const double d = amp * (std::cos(theta + eps) - std::cos(theta));
        sum += d * d;
      }
      acc += sum / static_cast<double>(ladder.count());
    }
    const double measured = acc / trials;
    const double predicted = predicted_mse(s2, r_ref * r_s);
    const double rel = std::abs(measured - predicted) / predicted;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "s2=%g rel err %.3f; ", s2, rel);
    detail += buf;
    if (rel > 0.10) o.pass = false;
  }
  o.detail = detail;
  return o;
}

// 5. resampling MSE behavior vs OSR, interpolation ordering, real-time floor
Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  Config cfg = Config::defaults();
  cfg.mirror_depth = 998e-6;
  const ExperimentResult r = run_osr_surface(
      cfg, {2, 4, 8, 16, 32}, {0, 8, 10, 12, 14},
      {InterpKind::Previous, InterpKind::Linear, InterpKind::CubicSpline});
  return from_assertions(r, seconds_since(t0), 0.0);
}

// 6. axial motion sets a floor on the resampling MSE
Outcome criterion6() {
  Config cfg = Config::defaults();
  const SweepProfile profile = cfg.sweep();
  const SourceSpectrum spec = cfg.spectrum();
  const MziGeometry geom = cfg.geometry();
  const double depth = 998e-6;
  const auto refl = ReflectivityProfile::mirror(depth);
  const LevelLadder ladder = cfg.ladder(profile);
  const CalibClock clock = find_crossings(profile, ladder);
  const CalibratedScan ideal =
      realtime_calibrate(profile, refl, spec, ladder, clock, NoiseModel::off());

  InterferogramOptions motion;
  motion.perturb_amp = 1e-6;
  motion.perturb_omega = kTwoPi * 100.0;

  const SampledSignal mzi = synth_mzi(profile, geom, spec,
                                      uniform_grid(profile.t_scan, cfg.samples),
                                      NoiseModel::off());
  const double f_max = depth * profile.slope(profile.t_scan / 2) / kPi * 1.3;

  std::vector<double> mses;
  for (const double osr : {8.0, 16.0, 32.0}) {
    const Eigen::Index li =
        static_cast<Eigen::Index>(std::ceil(osr * 2.0 * f_max * profile.t_scan));
    const SampledSignal interf = synth_interferogram(
        profile, refl, spec, uniform_grid(profile.t_scan, li), NoiseModel::off(), motion);
    ResampleOptions ro;
    ro.interp = InterpKind::CubicSpline;
    ro.osr = osr;
    ro.anchor_time = 0.5 * profile.t_scan;
    ro.anchor_k = profile.eval(ro.anchor_time);
    const CalibratedScan scan = resample_calibrate(
        mzi, interf, [](const SampledSignal& s) { return hilbert_phase(s); }, geom.dl,
        ladder, ro);
    if (scan.samples.size() != ideal.samples.size())
      return {false, "ladder coverage changed between pipelines"};
    mses.push_back(mse(scan, ideal));
  }
  const double lo = *std::min_element(mses.begin(), mses.end());
  const double hi = *std::max_element(mses.begin(), mses.end());
  char buf[128];
  std::snprintf(buf, sizeof(buf), "MSE at OSR {8,16,32}: %.3e %.3e %.3e (spread %.1f%%)",
                mses[0], mses[1], mses[2], 100.0 * (hi - lo) / lo);
  return {hi <= 1.20 * lo, buf};
}

// 7. arithmetic counts: closed forms and the instrumented split-radix FFT
Outcome criterion7() {
  Outcome o;
  std::string detail;

  // count_ops reproduces the closed forms
  const auto h = count_ops(CountMethod::HilbertFir, 17, 1024, 32);
  if (h.total != 34816.0) {
    o.pass = false;
    detail += "Hilbert total != 34816; ";
  }
  for (const Eigen::Index P : {8, 16, 32, 64}) {
    const auto r = count_ops(CountMethod::Ipdft, 17, P, P);
    const double lg = std::log2(static_cast<double>(P));
    const double sign = (static_cast<int>(lg) % 2 == 0) ? 1.0 : -1.0;
    const double adds = P * (4.0 / 3.0 * lg - 8.0 / 9.0) - sign / 9.0;
    const double mults = P * (2.0 / 3.0 * lg - 19.0 / 9.0) + sign / 9.0;
    if (std::abs(r.adds - adds) > 1e-9 || std::abs(r.mults - mults) > 1e-9 ||
        std::abs(r.total - (2.0 * P * lg - 3.0 * P)) > 1e-9)
      o.pass = false;
  }
  detail += "closed forms ok; ";

  // instrumented split-radix FFT vs the per-block formulas, exact match
  // demanded for P in {8,16,32,64}
  bool measured_ok = true;
  for (const Eigen::Index P : {8, 16, 32, 64}) {
    OpCount ops;
    ComplexVec x(static_cast<std::size_t>(P));
    const CounterRng rng{7, 7};
    for (Eigen::Index i = 0; i < P; ++i)
      x[static_cast<std::size_t>(i)] =
          Complex(rng.gaussian(static_cast<std::uint64_t>(i)), 0.0);
    fft(std::move(x), &ops);
    const auto r = count_ops(CountMethod::Ipdft, 17, P, P);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "P=%ld measured %lld/%lld vs formula %.0f/%.0f (adds/mults); ",
                  static_cast<long>(P), ops.adds, ops.mults, r.adds, r.mults);
    detail += buf;
    if (std::abs(static_cast<double>(ops.adds) - r.adds) > 1e-6 ||
        std::abs(static_cast<double>(ops.mults) - r.mults) > 1e-6)
      measured_ok = false;
    // the measured counts sit exactly at twice the tabulated per-block
    // formulas plus the classic constants (2 adds, 6 mults); note it so the
    // relation is visible in the log
    if (std::abs(static_cast<double>(ops.adds) - (2.0 * r.adds + 2.0)) > 1e-6 ||
        std::abs(static_cast<double>(ops.mults) - (2.0 * r.mults + 6.0)) > 1e-6)
      detail += "(affine relation broken!) ";
  }
  if (!measured_ok) {
    o.pass = false;
    detail +=
        "measured counts are the classic split-radix values, exactly "
        "2x(per-block formula)+{2 adds,6 mults}; the tabulated per-block mult "
        "count is even negative at P=8, so no operation counter can equal it";
  }
  o.detail = detail;
  return o;
}

// 8. timing directions
Outcome criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  Config cfg = Config::defaults();
  const ExperimentResult r = run_timing(cfg, {4096, 8192, 16384}, 9);
  return from_assertions(r, seconds_since(t0), 0.0);
}

// 9. sensitivity roll-off against the closed form
Outcome criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  Config cfg = Config::defaults();
  cfg.ladder_m = 1536;  // z_max comfortably past the -6 dB depth
  const ExperimentResult r =
      run_rolloff(cfg, {0.3e-3, 0.6e-3, 0.9e-3, 1.2e-3, 1.5e-3, 1.8e-3, 2.1e-3}, 0.2e-9);
  return from_assertions(r, seconds_since(t0), 0.0);
}

// 10. clock fidelity and LMS skew adaptation
Outcome criterion10() {
  const auto t0 = std::chrono::steady_clock::now();
  Config cfg = Config::defaults();
  const ExperimentResult r = run_skew(cfg, {0.1e-9, 0.5e-9, 1.0e-9}, 1.0, 200);
  return from_assertions(r, seconds_since(t0), 0.0);
}

// 11. IpDFT accuracy at bin offset 0.3, P = 64, and scale invariance
Outcome criterion11() {
  const Eigen::Index P = 64;
  const double k_true = 16.3;  // mid-band keeps the negative-frequency image far
  const double w_true = kTwoPi * k_true / static_cast<double>(P);
  ArrayX v(P), v10(P);
  for (Eigen::Index i = 0; i < P; ++i) {
    v[i] = std::cos(w_true * static_cast<double>(i) + 0.4);
    v10[i] = 10.0 * v[i];
  }
  const auto sig = SampledSignal::make_uniform(1.0, v);
  const auto sig10 = SampledSignal::make_uniform(1.0, v10);

  IpdftParams by2;
  by2.block_len = P;
  IpdftParams rvci;
  rvci.block_len = P;
  rvci.method = IpdftMethod::RVCI;
  rvci.window = WindowKind::RvciOrderO;
  rvci.order = 1;

  const double tol = 1e-4 * kTwoPi / static_cast<double>(P);
  const double e_by2 = std::abs(ipdft_estimate(sig, by2).blocks[0].omega0 - w_true);
  const double e_rvci = std::abs(ipdft_estimate(sig, rvci).blocks[0].omega0 - w_true);

  const auto a1 = ipdft_estimate(sig, by2).blocks[0];
  const auto b1 = ipdft_estimate(sig10, by2).blocks[0];
  const auto a2 = ipdft_estimate(sig, rvci).blocks[0];
  const auto b2 = ipdft_estimate(sig10, rvci).blocks[0];
  const double scale_dev =
      std::max(std::max(std::abs(a1.omega0 - b1.omega0), std::abs(a1.d - b1.d)),
               std::max(std::abs(a2.omega0 - b2.omega0), std::abs(a2.d - b2.d)));

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "BY2 err %.2e, RVCI1 err %.2e (tol %.2e); 10x-scale dev %.1e",
                e_by2, e_rvci, tol, scale_dev);
  return {e_by2 <= tol && e_rvci <= tol && scale_dev < 1e-12, buf};
}

const char* kDescriptions[] = {
    "axial-resolution grid within 15% of 11.1 um (envelope + hilbert)",
    "uncalibrated FWHM at 1481 um at least 3x the calibrated",
    "EKF phase MSE at most 0.1x Hilbert over the SNR grid",
    "Monte-Carlo MSE matches (1/2) R_R R_S sigma_k^2 within 10%",
    "resampling MSE vs OSR orderings and the real-time quantization floor",
    "axial-motion MSE floor flat within 20% over OSR {8,16,32}",
    "arithmetic counts: closed forms and instrumented split-radix FFT",
    "median wall time UKF <= EKF and IpDFT(32) <= Hilbert at L >= 4096",
    "-6 dB roll-off depth within 10% of 2 ln2/delta_r_k",
    "clock events within 1e-12 of their levels; LMS skew below 1 ps",
    "IpDFT frequency error at bin offset 0.3 and amplitude-scale invariance",
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> todo;
  if (argc < 2 || std::string(argv[1]) == "all") {
    for (int i = 1; i <= 11; ++i) todo.push_back(i);
  } else {
    const int c = std::atoi(argv[1]);
    if (c < 1 || c > 11) {
      std::cerr << "usage: acceptance [1..11|all]\n";
      return 1;
    }
    todo.push_back(c);
  }

  Outcome (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                             criterion5, criterion6, criterion7, criterion8,
                             criterion9, criterion10, criterion11};
  bool all_pass = true;
  for (const int c : todo) {
    Outcome o;
    try {
      o = criteria[c - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << c << ": "
              << kDescriptions[c - 1] << (o.detail.empty() ? "" : " -- " + o.detail)
              << "\n";
  }
  return all_pass ? 0 : 2;
}
