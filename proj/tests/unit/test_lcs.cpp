#include <doctest.h>

#include <cmath>

#include "octcal/lcs.hpp"

using namespace octcal;

TEST_CASE("build_ladder") {
  const auto l2 = build_ladder(0.0, 1.0, 2);
  CHECK(l2.levels[0] == 0.0);
  CHECK(l2.levels[1] == 1.0);

  const auto l5 = build_ladder(0.0, 1.0, 5);
  for (int i = 0; i < 5; ++i) CHECK(l5.levels[i] == doctest::Approx(0.25 * i));

  CHECK_THROWS_AS(build_ladder(0.0, 1.0, 1), std::domain_error);
  CHECK_THROWS_AS(build_ladder(1.0, 0.0, 4), std::domain_error);

  // spacing against a summation oracle over a real span
  const double k0 = 4.6e6, k1 = 5.4e6;
  const auto big = build_ladder(k0, k1, 1024);
  const double ideal = (k1 - k0) / 1023.0;
  double worst = 0.0;
  for (Eigen::Index i = 1; i < 1024; ++i)
    worst = std::max(worst, std::abs((big.levels[i] - big.levels[i - 1]) - ideal));
  CHECK(worst < 1e-12 * (k1 - k0));
}

TEST_CASE("find_crossings") {
  const auto lin = SweepProfile::cubic(0.0, 1.0, 0.0, 0.0, 1.0);
  const auto ladder = build_ladder(0.1, 0.9, 9);
  const auto clock = find_crossings(lin, ladder);
  REQUIRE(clock.events.size() == 9);
  for (Eigen::Index i = 1; i < 9; ++i)
    CHECK(clock.events[i] - clock.events[i - 1] == doctest::Approx(0.1).epsilon(1e-9));

  // fast middle: event spacing larger at the extremes
  const auto cub = SweepProfile::s_curve(1e6, 2e6, 1e-5, 0.8);
  const auto lad2 = interior_ladder(cub, 64, 0.02);
  const auto clk2 = find_crossings(cub, lad2);
  const double first = clk2.events[1] - clk2.events[0];
  const double mid = clk2.events[33] - clk2.events[32];
  const double last = clk2.events[63] - clk2.events[62];
  CHECK(first > mid);
  CHECK(last > mid);
  for (Eigen::Index i = 1; i < clk2.events.size(); ++i)
    CHECK(clk2.events[i] > clk2.events[i - 1]);

  // out-of-span levels are skipped, count conserved
  const auto wide = build_ladder(-0.5, 1.5, 21);
  const auto clk3 = find_crossings(lin, wide);
  CHECK(clk3.events.size() + clk3.skipped == 21);
  CHECK(clk3.skipped == 10);

  // the literal calibration property
  const double tol = 1e-12 * cub.span();
  for (Eigen::Index i = 0; i < clk2.events.size(); ++i)
    CHECK(std::abs(cub.eval(clk2.events[i]) -
                   lad2.levels[clk2.level_index[static_cast<std::size_t>(i)]]) <= tol);
}

TEST_CASE("find_crossings_sampled vs analytic inverse") {
  const auto cub = SweepProfile::s_curve(1e6, 2e6, 1e-5, 0.5);
  const Eigen::Index n = 8192;
  ArrayX t(n), k(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t[i] = cub.t_scan * static_cast<double>(i) / static_cast<double>(n - 1);
    k[i] = cub.eval(t[i]);
  }
  const auto ladder = interior_ladder(cub, 128, 0.05);
  const auto clk = find_crossings_sampled(t, k, ladder);
  const auto truth = find_crossings(cub, ladder);
  REQUIRE(clk.events.size() == truth.events.size());
  // linear interpolation is good to half a sample period here
  const double dt = t[1] - t[0];
  for (Eigen::Index i = 0; i < clk.events.size(); ++i)
    CHECK(std::abs(clk.events[i] - truth.events[i]) < 0.5 * dt);
}

TEST_CASE("check_rate") {
  const auto hw = LcsHardware::make(8, 1.0, 7.7e9);
  CalibClock clock;
  clock.events = ArrayX(3);
  clock.events << 0.0, 130e-12, 260e-12;  // 130 ps spacing: equality passes
  clock.level_index = {0, 1, 2};
  const auto rep = check_rate(clock, hw);
  CHECK(rep.violations == 0);
  CHECK(rep.min_spacing == doctest::Approx(130e-12));

  clock.events << 0.0, 100e-12, 200e-12;  // below the 129.9 ps period
  CHECK(check_rate(clock, hw).violations == 2);

  // SR bound U*f_s/2^Q
  CHECK(check_rate(clock, hw).slew_rate_bound == doctest::Approx(7.7e9 / 256.0));
  CHECK_FALSE(check_rate(clock, hw, 4e7).slew_ok);
  CHECK(check_rate(clock, hw, 2e7).slew_ok);
}

TEST_CASE("fom") {
  CHECK(fom(402e-6, 10.0, 5e6) == doctest::Approx(0.039e-12).epsilon(0.01));
  CHECK(fom(9.25e-6, 8.81, 2e6) == doctest::Approx(0.0052e-12).epsilon(0.02));
  CHECK(fom(1e-3, 8.0, 2e6) == doctest::Approx(2.0 * fom(1e-3, 8.0, 4e6)).epsilon(1e-12));
  CHECK_THROWS_AS(fom(0.0, 8.0, 1e6), std::invalid_argument);
}

TEST_CASE("estimate_skew") {
  CHECK(estimate_skew(0.0, 5e-9, 5e-9) == 0.0);
  CHECK(estimate_skew(0.0, 7e-9, 5e-9) == doctest::Approx(2e-9));
  // positive means the calibrating path is slower
  CHECK(estimate_skew(0.0, 9e-9, 4e-9) > 0.0);
  CHECK(estimate_skew(0.0, 4e-9, 9e-9) < 0.0);
  CHECK_THROWS_AS(estimate_skew(0.0, -1e-9, 0.0), std::invalid_argument);
}

TEST_CASE("lms_adapt") {
  const auto lin = SweepProfile::cubic(1e6, 1e11, 0.0, 0.0, 1e-5);
  const auto ladder = interior_ladder(lin, 32, 0.1);

  // zero skew: fixed point at iteration 0
  const auto r0 = lms_adapt(lin, ladder, 0.0, 1.0, 10);
  CHECK(r0.converged);
  CHECK(r0.iterations == 0);
  CHECK((r0.adjusted.levels == ladder.levels).all());

  // linear sweep: adjusted levels shift by exactly a1 * skew
  const double tau = 0.7e-9;
  const auto r1 = lms_adapt(lin, ladder, tau, 1.0, 50);
  CHECK(r1.converged);
  for (Eigen::Index i = 0; i < ladder.count(); ++i)
    CHECK(r1.adjusted.levels[i] - ladder.levels[i] ==
          doctest::Approx(lin.a1 * tau).epsilon(1e-6));

  // cubic sweep, 1 ns skew: residual below 1 ps within 200 iterations
  const auto cub = SweepProfile::s_curve(4.796e6, 4.796e6 + 7.5e5, 1.0 / 150e3, 0.5);
  const auto lad2 = interior_ladder(cub, 64, 0.05);
  const auto r2 = lms_adapt(cub, lad2, 1e-9, 1.0, 200);
  CHECK(r2.converged);
  CHECK(r2.iterations <= 200);
  CHECK(r2.residual_trace.back() < 1e-12);

  // non-convergence raises with the residual trace message
  CHECK_THROWS_AS(lms_adapt(cub, lad2, 1e-9, 1e-6, 3), std::runtime_error);
}
