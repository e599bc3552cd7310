#include <doctest.h>

#include <cmath>

#include "octcal/rng.hpp"
#include "octcal/sweep.hpp"

using namespace octcal;

namespace {

// bisection inverse, independent of the Newton path under test
double bisect_invert(const SweepProfile& p, double target) {
  double lo = 0.0, hi = p.t_scan;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (p.eval(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("eval_sweep polynomial") {
  const auto lin = SweepProfile::cubic(0.0, 1.0, 0.0, 0.0, 10.0);
  CHECK(lin.eval(0.0) == 0.0);
  CHECK(lin.eval(2.0) == 2.0);

  // Horner evaluation against a naive power sum on a fitted-style profile
  const double k0 = 4.796e6;
  const auto p = SweepProfile::s_curve(k0, k0 + 7.5e5, 1.0 / 150e3, 0.5);
  const double t = 0.5 * p.t_scan;
  const double naive = p.k0 + p.a1 * t + p.a2 * std::pow(t, 2) + p.a3 * std::pow(t, 3);
  CHECK(p.eval(t) == doctest::Approx(naive).epsilon(1e-14));

  CHECK_THROWS_AS(p.eval(-1e-9), std::domain_error);
  CHECK_THROWS_AS(p.eval(p.t_scan * 1.001), std::domain_error);
  CHECK_THROWS_AS(SweepProfile::cubic(0.0, -1.0, 0.0, 0.0, 1.0), std::invalid_argument);
  // slope dips negative mid-scan
  CHECK_THROWS_AS(SweepProfile::cubic(0.0, 1.0, -4.0, 2.7, 1.0), std::invalid_argument);
}

TEST_CASE("invert_sweep") {
  const auto lin = SweepProfile::cubic(0.0, 1.0, 0.0, 0.0, 10.0);
  CHECK(lin.invert(5.0) == doctest::Approx(5.0).epsilon(1e-14));

  const auto p = SweepProfile::s_curve(4.796e6, 4.796e6 + 7.5e5, 1.0 / 150e3, 0.5);
  const double t = 0.3 * p.t_scan;
  CHECK(p.invert(p.eval(t)) == doctest::Approx(t).epsilon(1e-12));
  CHECK_THROWS_AS(p.invert(p.k_start() - 1.0), std::domain_error);
  CHECK_THROWS_AS(p.invert(p.k_end() + 1.0), std::domain_error);

  // random monotone cubics, 100 targets each, against the bisection oracle
  const CounterRng rng{42, 7};
  for (int trial = 0; trial < 5; ++trial) {
    const double bend = rng.uniform(static_cast<std::uint64_t>(trial));
    const auto q = SweepProfile::s_curve(1e6, 2e6, 1e-5, bend);
    for (int i = 0; i < 100; ++i) {
      const double u = rng.uniform(static_cast<std::uint64_t>(100 + trial * 100 + i));
      const double target = q.k_start() + u * q.span();
      const double t_newton = q.invert(target);
      const double t_bisect = bisect_invert(q, target);
      CHECK(std::abs(t_newton - t_bisect) < 1e-12 * q.t_scan);
      CHECK(std::abs(q.eval(t_newton) - target) <= 1e-12 * q.span());
    }
  }
}

TEST_CASE("sweep monotonicity and round trip") {
  const auto p = SweepProfile::s_curve(1e6, 2e6, 1e-5, 0.9);
  double prev = p.eval(0.0);
  for (int i = 1; i <= 512; ++i) {
    const double t = p.t_scan * i / 512.0;
    const double k = p.eval(t);
    CHECK(k > prev);
    prev = k;
    CHECK(p.invert(k) == doctest::Approx(t).epsilon(1e-10));
  }
}

TEST_CASE("coherence_length") {
  const double lambda0 = 1310e-9, dlambda = 68e-9;
  const auto spec = SourceSpectrum::from_wavelength(lambda0, dlambda);
  CHECK(coherence_length(spec) == doctest::Approx(11.14e-6).epsilon(2e-3));
  CHECK(coherence_length_wl(lambda0, 2 * dlambda) ==
        doctest::Approx(5.57e-6).epsilon(2e-3));
  // dk doubled halves l_c
  const auto wide = SourceSpectrum::from_wavenumber(spec.k_center, 2 * spec.dk);
  CHECK(coherence_length(wide) == doctest::Approx(0.5 * coherence_length(spec)));
  // exact agreement between the k and wavelength forms
  CHECK(coherence_length(spec) ==
        doctest::Approx(coherence_length_wl(lambda0, dlambda)).epsilon(1e-12));
}

TEST_CASE("max_depth") {
  CHECK(max_depth_wl(1310e-9, 0.1e-9) == doctest::Approx(4.29e-3).epsilon(2e-3));
  CHECK(max_depth(kPi / 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_depth(0.5) == doctest::Approx(2.0 * max_depth(1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(max_depth(0.0), std::domain_error);
  // Table 1.1 wavelength form to 1e-12 relative
  CHECK(max_depth(delta_k_from_delta_lambda(1310e-9, 0.1e-9)) ==
        doctest::Approx(std::pow(1310e-9, 2) / (4 * 0.1e-9)).epsilon(1e-12));
}

TEST_CASE("rolloff_6db") {
  CHECK(rolloff_6db_wl(1310e-9, 0.2e-9) == doctest::Approx(1.89e-3).epsilon(3e-3));
  CHECK(rolloff_6db(2.0 * kLn2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(rolloff_6db(-1.0), std::domain_error);
  // the z-domain envelope is exactly 1/2 at the -6 dB depth
  const double drk = 123.4;
  const double z6 = rolloff_6db(drk);
  CHECK(std::exp(-drk * drk * z6 * z6 / (4.0 * kLn2)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rolloff_6db(delta_k_from_delta_lambda(1310e-9, 0.2e-9)) ==
        doctest::Approx((kLn2 / kPi) * std::pow(1310e-9, 2) / 0.2e-9).epsilon(1e-12));
}

TEST_CASE("reflectivity profile validation") {
  CHECK_THROWS_AS(ReflectivityProfile::make(0.0, 0.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(ReflectivityProfile::make(1.0, 0.0, {{1e-3, 1.5}}), std::invalid_argument);
  CHECK_THROWS_AS(ReflectivityProfile::make(1.0, 0.0, {{1e-3, 0.5}, {1e-3, 0.2}}),
                  std::invalid_argument);
  // a reflector at the reference depth is allowed (DC-adjacent term)
  CHECK_NOTHROW(ReflectivityProfile::make(1.0, 0.0, {{0.0, 0.5}}));
}
