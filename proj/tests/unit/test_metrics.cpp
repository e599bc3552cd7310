#include <doctest.h>

#include <cmath>

#include "octcal/metrics.hpp"
#include "octcal/rng.hpp"

using namespace octcal;

TEST_CASE("fwhm of exact gaussian samples") {
  const Eigen::Index n = 2048;
  const double sigma = 37.3e-6, center = 1.1e-3, dz = 2e-6;
  AScan a;
  a.depth_axis = ArrayX::LinSpaced(n, 0.0, dz * static_cast<double>(n - 1));
  a.magnitude.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = (a.depth_axis[i] - center) / sigma;
    a.magnitude[i] = 5.0 * std::exp(-0.5 * u * u);
  }
  const double expect = 2.0 * std::sqrt(2.0 * kLn2) * sigma;
  CHECK(fwhm(a) == doctest::Approx(expect).epsilon(0.005));

  // scale invariance
  AScan b = a;
  b.magnitude *= 123.0;
  CHECK(fwhm(b) == doctest::Approx(fwhm(a)).epsilon(1e-12));
}

TEST_CASE("fwhm hint selects the requested peak") {
  const Eigen::Index n = 4096;
  AScan a;
  a.depth_axis = ArrayX::LinSpaced(n, 0.0, 4e-3);
  a.magnitude.resize(n);
  auto gauss = [&](double z, double c, double s) {
    return std::exp(-0.5 * (z - c) * (z - c) / (s * s));
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = a.depth_axis[i];
    a.magnitude[i] = 10.0 * gauss(z, 1e-3, 20e-6) + 6.0 * gauss(z, 3e-3, 60e-6);
  }
  const double w1 = fwhm(a, 1e-3);
  const double w2 = fwhm(a, 3e-3);
  CHECK(w1 == doctest::Approx(2.0 * std::sqrt(2.0 * kLn2) * 20e-6).epsilon(0.01));
  CHECK(w2 == doctest::Approx(2.0 * std::sqrt(2.0 * kLn2) * 60e-6).epsilon(0.01));

  AScan flat;
  flat.depth_axis = ArrayX::LinSpaced(64, 0.0, 1.0);
  flat.magnitude = ArrayX::Constant(64, 1.0);
  CHECK_THROWS_AS(fwhm(flat), std::runtime_error);  // no dominant peak
}

TEST_CASE("mse") {
  ArrayX a(4), b(4);
  a << 1, 2, 3, 4;
  CHECK(mse(a, a) == 0.0);
  b = a + 0.5;
  CHECK(mse(a, b) == doctest::Approx(0.25));
  CHECK(mse(a, b) == mse(b, a));
  ArrayX c(3);
  CHECK_THROWS_AS(mse(a, c), std::invalid_argument);
}

TEST_CASE("predicted_mse and improvement") {
  CHECK(predicted_mse(1e-6, 1.0) == doctest::Approx(5e-7));
  CHECK(predicted_mse(0.0, 42.0) == 0.0);
  CHECK(predicted_mse(2e-4, 3.0) == doctest::Approx(12.0 * predicted_mse(1e-4, 0.5)));
  CHECK(mse_improvement(1.0, 0.0) == doctest::Approx(100.0));
  CHECK(mse_improvement(1.0, 1.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(mse_improvement(0.0, 0.0), std::domain_error);
}

TEST_CASE("monte-carlo phase error matches the closed form") {
  // unit-amplitude mirror scan with injected phase error of variance s2:
  // MSE approaches (1/2) * s2
  const Eigen::Index n = 1024;
  const CounterRng rng{314, 0};
  for (const double s2 : {1e-6, 1e-4, 1e-2}) {
    const double s = std::sqrt(s2);
    double acc = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double th = 0.37 * static_cast<double>(i);
        const double eps = s * CounterRng{static_cast<std::uint64_t>(t), 1}.gaussian(
                                   static_cast<std::uint64_t>(i));
        const double d = std::cos(th + eps) - std::cos(th);
        sum += d * d;
      }
      acc += sum / static_cast<double>(n);
    }
    const double measured = acc / trials;
    CHECK(measured == doctest::Approx(predicted_mse(s2, 1.0)).epsilon(0.10));
  }
  (void)rng;
}

TEST_CASE("tradeoff") {
  // closed form 4 sqrt(ln2) (N/pi) (z_max/l_c)
  const double f = tradeoff(10e-6, 1e6, 3e-3);
  CHECK(f == doctest::Approx(4.0 * std::sqrt(kLn2) / kPi * 1e6 * 300.0).epsilon(1e-12));
  // doubling the A-scan rate doubles f_sample
  CHECK(tradeoff(10e-6, 2e6, 3e-3) == doctest::Approx(2.0 * f));
  // f_sample = M * N identity: M = 4 sqrt(ln2)/pi * z_max/l_c
  const double M = 1000.0;
  const double lc = 11e-6;
  const double zmax = M * lc * kPi / (4.0 * std::sqrt(kLn2));
  CHECK(tradeoff(lc, 1e6, zmax) == doctest::Approx(M * 1e6).epsilon(1e-9));
}

TEST_CASE("rolloff curve") {
  const std::vector<double> depths{1e-4, 5e-4, 1e-3, 1.5e-3, 2e-3};
  std::vector<double> peaks;
  const double z6_true = 1.2e-3;
  for (const double z : depths)
    peaks.push_back(std::pow(10.0, -6.0 / 20.0 * z / z6_true));  // -6 dB at z6_true
  const auto curve = rolloff_from_peaks(depths, peaks);
  CHECK(curve.points.front().peak_db ==
        doctest::Approx(0.0).epsilon(1e-12));  // normalized to the first depth
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    CHECK(curve.points[i].peak_db < curve.points[i - 1].peak_db);
  // note the curve normalizes to depth[0], so the crossing shifts by that bias
  CHECK(curve.depth_6db == doctest::Approx(z6_true + depths.front()).epsilon(1e-6));
}

TEST_CASE("metrics aggregation") {
  auto cell = MetricsReport::aggregate({{"k", "v"}}, {1.0, 2.0, 3.0});
  CHECK(cell.mean == doctest::Approx(2.0));
  CHECK(cell.stddev == doctest::Approx(1.0));
  CHECK(cell.values.size() == 3);
}
