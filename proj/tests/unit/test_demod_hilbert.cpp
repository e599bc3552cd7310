#include <doctest.h>

#include <cmath>

#include "octcal/demod.hpp"
#include "octcal/rng.hpp"

using namespace octcal;

TEST_CASE("hilbert phase of a pure tone") {
  const Eigen::Index n = 4096;
  ArrayX v(n);
  const double w = kTwoPi * 64.0 / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = std::cos(w * static_cast<double>(i));
  const auto est = hilbert_phase(SampledSignal::make_uniform(1.0, v));
  for (Eigen::Index i = n / 10; i < n * 9 / 10; i += 41) {
    const double slope = est.phase[i + 1] - est.phase[i];
    CHECK(slope == doctest::Approx(w).epsilon(1e-6));
  }
}

TEST_CASE("hilbert phase of a linear chirp vs the analytic integral") {
  const Eigen::Index n = 8192;
  ArrayX v(n);
  // phase(t) = w0 n + 0.5 a n^2
  const double w0 = 0.12, a = 0.1 / static_cast<double>(n);
  auto phase = [&](double i) { return w0 * i + 0.5 * a * i * i; };
  for (Eigen::Index i = 0; i < n; ++i) v[i] = std::cos(phase(static_cast<double>(i)));
  const auto est = hilbert_phase(SampledSignal::make_uniform(1.0, v));
  const double offset = est.phase[n / 2] - phase(static_cast<double>(n / 2));
  for (Eigen::Index i = n / 10; i < n * 9 / 10; i += 101)
    CHECK(std::abs(est.phase[i] - offset - phase(static_cast<double>(i))) < 1e-3);
}

TEST_CASE("hilbert amplitude recovers the envelope") {
  const Eigen::Index n = 4096;
  ArrayX v(n);
  const double w = kTwoPi * 150.0 / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double am = 1.0 + 0.4 * std::sin(kTwoPi * 3.0 * i / static_cast<double>(n));
    v[i] = am * std::cos(w * static_cast<double>(i));
  }
  const auto est = hilbert_phase(SampledSignal::make_uniform(1.0, v));
  for (Eigen::Index i = n / 8; i < n * 7 / 8; i += 173) {
    const double am = 1.0 + 0.4 * std::sin(kTwoPi * 3.0 * i / static_cast<double>(n));
    CHECK(est.amplitude[i] == doctest::Approx(am).epsilon(0.01));
  }
}

TEST_CASE("hilbert contract errors") {
  // constant input has no analytic phase
  SampledSignal flat = SampledSignal::make_uniform(1.0, ArrayX::Constant(64, 0.7));
  CHECK_THROWS_AS(hilbert_phase(flat), std::domain_error);

  // nonuniform input
  ArrayX t(16), v(16);
  for (int i = 0; i < 16; ++i) {
    t[i] = i * i;
    v[i] = std::cos(0.3 * i);
  }
  CHECK_THROWS_AS(hilbert_phase(SampledSignal::make(t, v)), std::invalid_argument);

  CHECK_THROWS_AS(hilbert_phase(SampledSignal::make_uniform(1.0, ArrayX::Zero(8))),
                  std::invalid_argument);
}

TEST_CASE("unwrap_phase greedy jump correction") {
  const Eigen::Index n = 500;
  ArrayX truth(n), wrapped(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    truth[i] = 0.11 * static_cast<double>(i);
    wrapped[i] = std::atan2(std::sin(truth[i]), std::cos(truth[i]));
  }
  const ArrayX un = unwrap_phase(wrapped);
  CHECK(((un - truth).abs() < 1e-12).all());
}
