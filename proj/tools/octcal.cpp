#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "octcal/bench.hpp"
#include "octcal/fft.hpp"
#include "octcal/io.hpp"
#include "octcal/rng.hpp"

namespace fs = std::filesystem;
using namespace octcal;

namespace {

struct Global {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

Config load_config(const Global& g) {
  Config cfg = g.config_path.empty() ? Config::defaults() : Config::from_file(g.config_path);
  if (g.seed_set) cfg.seed = g.seed;
  if (g.threads > 0) cfg.threads = g.threads;
  return cfg;
}

void echo_summary(const Config& cfg, const fs::path& dir, const std::string& command,
                  bool pass) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = cfg.echo();
  j["pass"] = pass;
  fs::create_directories(dir);
  std::ofstream f(dir / "summary.json");
  f << j.dump(2) << '\n';
}

int cmd_synth(const Global& g) {
  const Config cfg = load_config(g);
  const SweepProfile profile = cfg.sweep();
  const SourceSpectrum spec = cfg.spectrum();
  const MziGeometry geom = cfg.geometry();
  const ArrayX grid = uniform_grid(profile.t_scan, cfg.samples);

  const SampledSignal mzi =
      synth_mzi(profile, geom, spec, grid, NoiseModel{cfg.sigma_w, cfg.seed});
  const SampledSignal interf = synth_interferogram(
      profile, cfg.reflectivity(), spec, grid, NoiseModel{cfg.sigma_w, cfg.seed});

  SampledSignal sweep_truth;
  ArrayX kv(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) kv[i] = profile.eval(grid[i]);
  sweep_truth = SampledSignal::make_uniform(mzi.rate, std::move(kv), grid[0]);

  const fs::path dir(g.out_dir);
  write_signal_csv(dir / "mzi.csv", mzi);
  write_signal_csv(dir / "interferogram.csv", interf);
  write_signal_csv(dir / "sweep_k.csv", sweep_truth);
  echo_summary(cfg, dir, "synth", true);
  std::cout << "wrote " << (dir / "mzi.csv") << ", interferogram.csv, sweep_k.csv\n";
  return 0;
}

CalibratedScan run_method(const Config& cfg, const std::string& method,
                          const ReflectivityProfile& refl, bool with_noise) {
  const SweepProfile profile = cfg.sweep();
  const SourceSpectrum spec = cfg.spectrum();
  const MziGeometry geom = cfg.geometry();
  const NoiseModel noise =
      with_noise ? NoiseModel{cfg.sigma_w, cfg.seed} : NoiseModel::off();

  if (method == "realtime") {
    const LevelLadder ladder = cfg.ladder(profile);
    return realtime_calibrate(profile, refl, spec, ladder, find_crossings(profile, ladder),
                              noise);
  }
  if (method == "envelope") {
    const Eigen::Index L = static_cast<Eigen::Index>(
        std::ceil(4.0 * geom.dl * profile.slope(-profile.a2 / (3.0 * profile.a3)) /
                  kTwoPi * profile.t_scan));
    const SampledSignal mzi =
        synth_mzi(profile, geom, spec, uniform_grid(profile.t_scan, L), noise);
    EnvelopeCalibOptions opt;
    opt.m_c = cfg.m_c > 0 ? cfg.m_c : 8;
    return envelope_calibrate(profile, refl, spec, mzi, geom, opt, noise);
  }

  const ArrayX grid = uniform_grid(profile.t_scan, cfg.samples);
  const SampledSignal mzi = synth_mzi(profile, geom, spec, grid, noise);
  const double depth = cfg.mirror_depth;
  const double f_max = depth * std::max(profile.slope(0.0), profile.slope(profile.t_scan / 2)) / kPi;
  const Eigen::Index Li =
      static_cast<Eigen::Index>(std::ceil(cfg.osr * 2.0 * f_max * profile.t_scan));
  const SampledSignal interf =
      synth_interferogram(profile, refl, spec, uniform_grid(profile.t_scan, Li), noise);

  if (method == "zero-crossing")
    return zero_crossing_calibrate(mzi, interf, ZeroCrossingMode::Basic, geom.dl);
  if (method == "zero-crossing-quad")
    return zero_crossing_calibrate(mzi, interf, ZeroCrossingMode::Quadrature, geom.dl);

  ResampleOptions ro;
  ro.interp = cfg.interp_kind();
  ro.osr = cfg.osr;
  ro.anchor_time = 0.5 * profile.t_scan;
  ro.anchor_k = profile.eval(ro.anchor_time);
  ro.estimator_tag = method;
  const Estimator est = make_estimator(method, cfg, profile, geom, cfg.sigma_w);
  return resample_calibrate(mzi, interf, est, geom.dl, cfg.ladder(profile), ro);
}

int cmd_calibrate(const Global& g, const std::string& method, bool no_calib, bool svg) {
  const Config cfg = load_config(g);
  const fs::path dir(g.out_dir);

  const CalibratedScan scan = run_method(cfg, method, cfg.reflectivity(), true);
  const CalibratedScan ref =
      run_method(cfg, method, ReflectivityProfile::make(cfg.r_ref, 0.0, {}), false);
  CalibratedScan clean = scan;
  try {
    clean = dc_subtract(scan, ref);
  } catch (const std::exception&) {
    // grids differ (noise moved the clock); emit the raw scan instead
  }
  const Eigen::Index fft_len = static_cast<Eigen::Index>(
      next_pow2(static_cast<std::size_t>(clean.samples.size()) * 2));
  const AScan a = reconstruct_ascan(clean, std::max<Eigen::Index>(fft_len, 4096));

  write_scan_csv(dir / "scan.csv", scan);
  write_ascan_csv(dir / "ascan.csv", a);
  if (svg) write_svg_plot(dir / "ascan.svg", a.depth_axis, a.magnitude, "A-scan (" + method + ")",
                          "depth_m", "magnitude");
  if (no_calib) {
    const SweepProfile profile = cfg.sweep();
    const ArrayX grid = uniform_grid(profile.t_scan, cfg.samples);
    const SampledSignal interf = synth_interferogram(
        profile, cfg.reflectivity(), cfg.spectrum(), grid, NoiseModel{cfg.sigma_w, cfg.seed});
    const AScan raw = reconstruct_uncalibrated(interf, profile, 4096);
    write_ascan_csv(dir / "ascan_uncalibrated.csv", raw);
  }
  echo_summary(cfg, dir, "calibrate --method " + method, true);
  std::cout << "wrote " << (dir / "scan.csv") << " and ascan.csv\n";
  return 0;
}

int cmd_bench(const Global& g, const std::string& experiment, int trials_override,
              std::vector<double> osr, std::vector<int> bits,
              std::vector<Eigen::Index> lengths, std::vector<double> depths_mm,
              std::vector<double> skews_ns) {
  const Config cfg = load_config(g);
  ExperimentResult result;
  if (experiment == "table31") {
    result = run_table31(cfg, trials_override > 0 ? trials_override : cfg.trials);
  } else if (experiment == "noise-sweep") {
    result = run_noise_sweep(cfg, {10, 15, 20, 25, 30},
                             trials_override > 0 ? trials_override : 50);
  } else if (experiment == "osr-surface") {
    if (osr.empty()) osr = {2, 4, 8, 16, 32};
    if (bits.empty()) bits = {0, 8, 10, 12, 14};
    result = run_osr_surface(cfg, osr, bits,
                             {InterpKind::Previous, InterpKind::Linear,
                              InterpKind::CubicSpline});
  } else if (experiment == "timing") {
    if (lengths.empty()) lengths = {4096, 8192, 16384};
    result = run_timing(cfg, lengths, 7);
  } else if (experiment == "rolloff") {
    std::vector<double> depths;
    if (depths_mm.empty()) depths_mm = {0.3, 0.6, 0.9, 1.2, 1.5, 1.8, 2.1};
    for (const double d : depths_mm) depths.push_back(d * 1e-3);
    result = run_rolloff(cfg, depths, 0.2e-9);
  } else if (experiment == "skew") {
    std::vector<double> skews;
    if (skews_ns.empty()) skews_ns = {0.1, 0.5, 1.0};
    for (const double s : skews_ns) skews.push_back(s * 1e-9);
    result = run_skew(cfg, skews, 1.0, 200);
  } else {
    std::cerr << "unknown experiment `" << experiment
              << "`; valid: table31, noise-sweep, osr-surface, timing, rolloff, skew\n";
    return 1;
  }

  const fs::path dir = write_outputs(result, g.out_dir);
  std::cout << "experiment " << result.name << " -> " << dir << "\n";
  for (const auto& a : result.assertions)
    std::cout << (a.pass ? "  [PASS] " : "  [FAIL] ") << a.name
              << (a.detail.empty() || a.pass ? "" : " -- " + a.detail) << "\n";
  return result.all_pass() ? 0 : 2;
}

int cmd_report(const std::string& dir) {
  const fs::path p = fs::path(dir) / "summary.json";
  std::ifstream f(p);
  if (!f) {
    std::cerr << "no summary.json under " << dir << "\n";
    return 1;
  }
  nlohmann::json j;
  f >> j;
  std::cout << "experiment: " << j.value("experiment", j.value("command", "?")) << "\n";
  if (j.contains("manifest_hash")) std::cout << "manifest: " << j["manifest_hash"] << "\n";
  bool pass = j.value("pass", false);
  if (j.contains("assertions"))
    for (const auto& a : j["assertions"])
      std::cout << (a.value("pass", false) ? "  [PASS] " : "  [FAIL] ")
                << a.value("name", "") << "\n";
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swept-source OCT spectral-calibration bench"};
  app.require_subcommand(1);

  Global g;
  app.add_option("--config", g.config_path, "configuration file");
  auto* seed_opt = app.add_option("--seed", g.seed, "base RNG seed");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--threads", g.threads, "worker threads (0 = all)");

  auto* synth = app.add_subcommand("synth", "write MZI/interferogram/sweep CSVs");

  auto* calibrate = app.add_subcommand("calibrate", "run one calibration pipeline");
  std::string method = "realtime";
  bool no_calib = false, svg = false;
  calibrate->add_option("--method", method,
                        "hilbert|envelope|ekf|ukf|ipdft-by2|ipdft-rvci1|ipdft-rvci3|"
                        "zero-crossing|zero-crossing-quad|realtime");
  calibrate->add_flag("--no-calib", no_calib, "also emit the uncalibrated A-scan");
  calibrate->add_flag("--svg", svg, "plot the A-scan");

  auto* bench = app.add_subcommand("bench", "run an experiment");
  std::string experiment;
  int trials = 0;
  std::vector<double> osr, depths_mm, skews_ns;
  std::vector<int> bits;
  std::vector<Eigen::Index> lengths;
  bench->add_option("experiment", experiment,
                    "table31|noise-sweep|osr-surface|timing|rolloff|skew")
      ->required();
  bench->add_option("--trials", trials, "trial count override");
  bench->add_option("--osr", osr, "OSR grid");
  bench->add_option("--bits", bits, "ADC2 bits grid (0 = unquantized)");
  bench->add_option("--lengths", lengths, "signal lengths");
  bench->add_option("--depths-mm", depths_mm, "depth grid, mm");
  bench->add_option("--skews-ns", skews_ns, "injected skews, ns");

  auto* report = app.add_subcommand("report", "summarize a previous run");
  std::string report_dir;
  report->add_option("dir", report_dir, "run directory containing summary.json")->required();

  CLI11_PARSE(app, argc, argv);
  g.seed_set = seed_opt->count() > 0;

  try {
    if (synth->parsed()) return cmd_synth(g);
    if (calibrate->parsed()) {
      const std::vector<std::string> valid{
          "hilbert", "envelope", "ekf", "ukf", "ipdft-by2", "ipdft-rvci1",
          "ipdft-rvci3", "zero-crossing", "zero-crossing-quad", "realtime"};
      if (std::find(valid.begin(), valid.end(), method) == valid.end()) {
        std::cerr << "unknown method `" << method << "`; valid:";
        for (const auto& v : valid) std::cerr << " " << v;
        std::cerr << "\n";
        return 1;
      }
      return cmd_calibrate(g, method, no_calib, svg);
    }
    if (bench->parsed())
      return cmd_bench(g, experiment, trials, osr, bits, lengths, depths_mm, skews_ns);
    if (report->parsed()) return cmd_report(report_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
