#include "support/fixtures.hpp"
#include "tscp/error.hpp"
#include "tscp/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tscp;

TEST(Synth, LogTimeModelMoments) {
  const std::size_t n = 100000;
  const auto s = generate(n, 200.0, 123);
  double mean = 0.0, ss = 0.0, c_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = s.dataset.row(i);
    const double r = std::log(s.true_time[i]) - (3.0 + 3.0 * x[0] - 2.0 * x[1]);
    mean += r;
    ss += r * r;
    c_mean += s.censor_time[i];
  }
  mean /= n;
  EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(ss / n - mean * mean, 1.0, 0.05);
  EXPECT_NEAR(c_mean / n, (1.0 + 200.0) / 2.0, 3.0 * (200.0 - 1.0) / std::sqrt(12.0 * n));
}

TEST(Synth, ObservedIsMinimum) {
  const auto s = generate(1000, 50.0, 7);
  for (std::size_t i = 0; i < 1000; ++i) {
    ASSERT_EQ(s.dataset.time(i), std::min(s.true_time[i], s.censor_time[i]));
    ASSERT_EQ(s.dataset.event(i), s.true_time[i] <= s.censor_time[i]);
    const auto x = s.dataset.row(i);
    ASSERT_GE(x[0], 0.0);
    ASSERT_LT(x[1], 1.0);
    ASSERT_GE(s.censor_time[i], 1.0);
    ASSERT_LE(s.censor_time[i], 50.0);
  }
}

TEST(Synth, SameSeedBitIdentical) {
  const auto a = generate(500, 80.0, 99);
  const auto b = generate(500, 80.0, 99);
  EXPECT_EQ(a.true_time, b.true_time);
  EXPECT_EQ(a.censor_time, b.censor_time);
  EXPECT_TRUE(a.dataset.covariates() == b.dataset.covariates());
  EXPECT_NE(a.true_time, generate(500, 80.0, 100).true_time);
}

TEST(Synth, CensoringRateDecreasesInT0) {
  double previous = 1.0;
  for (double t0 : {2.0, 10.0, 50.0, 200.0, 1000.0}) {
    const double rate = censoring_rate(t0, 5, 50000);
    EXPECT_LT(rate, previous);
    previous = rate;
  }
}

TEST(Synth, CalibratedT0MatchesOracle) {
  const double t30 = calibrate_t0(0.30, 1);
  const double t50 = calibrate_t0(0.50, 1);
  const auto tolerance = [](double slope) {
    return (0.005 + 3.0 * std::sqrt(0.25 / 200000.0)) / std::abs(slope);
  };
  EXPECT_NEAR(t30, tscp::testing::kT0Oracle30, tolerance(tscp::testing::kT0Slope30));
  EXPECT_NEAR(t50, tscp::testing::kT0Oracle50, tolerance(tscp::testing::kT0Slope50));
  EXPECT_LT(t50, t30);
}

TEST(Synth, FreshSampleHitsTargetRate) {
  const double t0 = calibrate_t0(0.30, 2);
  const auto s = generate(100000, t0, 777);
  std::size_t censored = 0;
  for (std::size_t i = 0; i < 100000; ++i) censored += s.dataset.event(i) ? 0 : 1;
  EXPECT_NEAR(censored / 1e5, 0.30, 0.01);
}

TEST(Synth, UnreachableTargetIsConfigError) {
  EXPECT_THROW(calibrate_t0(0.9999, 1), ConfigError);
  EXPECT_THROW(calibrate_t0(0.0, 1), ConfigError);
}
