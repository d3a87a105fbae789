#include "support/fixtures.hpp"
#include "tscp/conformal.hpp"
#include "tscp/cox.hpp"
#include "tscp/rng.hpp"
#include "tscp/scp.hpp"
#include "tscp/weibull_aft.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tscp;
using tscp::testing::all_rows;

namespace {

SurvivalDataset uncensored(std::size_t n, std::uint64_t seed) {
  const auto raw = tscp::testing::random_survival(n, 2, seed);
  return {raw.covariates(), raw.time(), std::vector<bool>(n, true)};
}

}  // namespace

TEST(WeightedQuantile, FourAtomFixture) {
  const std::vector<double> v{1, 2, 3};
  const std::vector<double> w{1, 1, 2};
  // Cumulative normalized mass is 0.2, 0.4, 0.8, 1.0 with the tail atom.
  EXPECT_EQ(weighted_quantile(v, w, 1.0, 0.5), 3.0);
  EXPECT_EQ(weighted_quantile(v, w, 1.0, 0.4), 2.0);
  EXPECT_EQ(weighted_quantile(v, w, 1.0, 0.81), kInfinity);
}

TEST(WeightedQuantile, SingleAtom) {
  const std::vector<double> v{4.2};
  const std::vector<double> w{1};
  for (double level : {0.01, 0.5, 0.99}) EXPECT_EQ(weighted_quantile(v, w, 0.0, level), 4.2);
}

TEST(WeightedQuantile, MatchesBruteForceOnSmallAtoms) {
  Rng rng(77);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto m = 1 + rng.below(4);
    std::vector<double> values(m), weights(m);
    std::vector<long> iw(m);
    for (std::size_t i = 0; i < m; ++i) {
      values[i] = static_cast<double>(rng.below(4));
      iw[i] = 1 + static_cast<long>(rng.below(5));
      weights[i] = static_cast<double>(iw[i]);
    }
    const long tail = static_cast<long>(rng.below(4));
    const long k = 1 + static_cast<long>(rng.below(19));
    const double expected = tscp::testing::brute_weighted_quantile(values, iw, tail, k, 20);
    ASSERT_EQ(weighted_quantile(values, weights, static_cast<double>(tail), k / 20.0), expected) << "trial " << trial;
  }
}

TEST(WeightedQuantile, UniformWeightsReduceToConformalRank) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = 1 + rng.below(50);
    std::vector<double> s(m);
    for (auto& v : s) v = rng.uniform();
    const double w = rng.uniform(0.1, 3.0);
    const double alpha = rng.uniform(0.01, 0.6);
    const std::vector<double> weights(m, w);
    ASSERT_EQ(weighted_quantile(s, weights, w, 1.0 - alpha), conformal_quantile(s, alpha));
  }
}

TEST(WeightedQuantile, RejectsEmpty) {
  EXPECT_THROW(weighted_quantile(std::vector<double>{}, std::vector<double>{}, 1.0, 0.5), std::invalid_argument);
}

TEST(TimeGrid, SpansData) {
  const auto data = tscp::testing::random_survival(50, 1, 1);
  const auto grid = make_time_grid(data);
  ASSERT_EQ(grid.size(), 512u);
  EXPECT_EQ(grid.front(), *std::min_element(data.time().begin(), data.time().end()) / 2);
  EXPECT_EQ(grid.back(), *std::max_element(data.time().begin(), data.time().end()));
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
}

TEST(Scp, NoCensoringMatchesUnweightedSet) {
  const auto data = uncensored(300, 13);
  const auto split = split_dataset(data, 0.5, 2);
  const auto model = fit_weibull_aft(data, split.train);
  const double alpha = 0.1;
  const WeightedCalibration cal(data, split, model, alpha);
  for (double w : cal.weights()) ASSERT_EQ(w, 1.0);
  const double q = conformal_quantile(cal.cal_scores(), alpha);
  EXPECT_EQ(cal.threshold(1.0), q);
  const auto grid = make_time_grid(data);
  for (std::size_t i = 0; i < data.size(); i += 11) {
    const auto x = data.row(i);
    std::ptrdiff_t first = -1, last = -1;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (cdf_score(model, x, grid[k]) <= q) {
        if (first < 0) first = static_cast<std::ptrdiff_t>(k);
        last = static_cast<std::ptrdiff_t>(k);
      }
    }
    ASSERT_GE(first, 0);
    const double lo = first == 0 ? 0.0 : grid[static_cast<std::size_t>(first)];
    const double hi = last + 1 == static_cast<std::ptrdiff_t>(grid.size()) ? kInfinity : grid[static_cast<std::size_t>(last)];
    EXPECT_EQ(scp_predict(cal, model, x, grid).interval, Interval(lo, hi));
  }
}

TEST(Scp, IncludedSetIsContiguousUnderUniformWeights) {
  for (std::uint64_t seed : {21, 22, 23}) {
    const auto data = uncensored(200, seed);
    const auto split = split_dataset(data, 0.5, seed);
    const auto model = fit_cox(data, split.train);
    const WeightedCalibration cal(data, split, model, 0.2);
    const double q = cal.threshold(1.0);
    const auto grid = make_time_grid(data);
    for (std::size_t i = 0; i < data.size(); i += 5) {
      int runs = 0;
      bool inside = false;
      for (double t : grid) {
        const bool keep = cdf_score(model, data.row(i), t) <= q;
        if (keep && !inside) ++runs;
        inside = keep;
      }
      ASSERT_LE(runs, 1);
    }
  }
}

TEST(Scp, SaturatedThresholdGivesWholeLine) {
  const auto data = tscp::testing::random_survival(40, 1, 3);
  const auto split = split_dataset(data, 0.5, 3);
  const auto model = fit_weibull_aft(data, split.train);
  const auto grid = make_time_grid(data);
  const auto p = scp_predict(data, split, model, 0.01, data.row(0), grid);
  EXPECT_EQ(p.interval, Interval(0, kInfinity));
}

TEST(Scp, LargerAlphaNeverWidens) {
  const auto data = tscp::testing::random_survival(400, 2, 31);
  const auto split = split_dataset(data, 0.5, 31);
  const auto model = fit_weibull_aft(data, split.train);
  const auto grid = make_time_grid(data);
  std::vector<WeightedCalibration> cals;
  for (double a : {0.05, 0.1, 0.2, 0.3}) cals.emplace_back(data, split, model, a);
  for (std::size_t i = 0; i < data.size(); i += 9) {
    for (std::size_t k = 1; k < cals.size(); ++k) {
      const auto wide = scp_predict(cals[k - 1], model, data.row(i), grid).interval;
      const auto narrow = scp_predict(cals[k], model, data.row(i), grid).interval;
      ASSERT_LE(wide.lower(), narrow.lower());
      ASSERT_GE(wide.upper(), narrow.upper());
    }
  }
}

TEST(Scp, WeightsUseLeftLimit) {
  const auto data = tscp::testing::random_survival(300, 1, 41);
  const auto split = split_dataset(data, 0.5, 41);
  const auto model = fit_weibull_aft(data, split.train);
  const WeightedCalibration cal(data, split, model, 0.1);
  ASSERT_EQ(cal.cal_scores().size() + cal.dropped(), split.cal1.size());
  for (std::size_t i = 0; i < cal.cal_times().size(); ++i) {
    EXPECT_DOUBLE_EQ(cal.weights()[i], 1.0 / cal.censor_curve().survival_before(cal.cal_times()[i]));
  }
}

TEST(Scp, ZeroCensoringSurvivalIsFlagged) {
  // The last calibration row is censored, so the censoring curve hits zero beyond it.
  const auto data = tscp::testing::make_dataset({{0}, {1}, {0}, {1}, {0}, {1}, {0}, {1}},
                                                {1, 2, 3, 4, 1.5, 2.5, 3.5, 5}, {1, 1, 1, 1, 1, 1, 1, 0});
  SplitIndices split;
  split.train = {0, 1, 2, 3};
  split.cal = {4, 5, 6, 7};
  split.cal1 = {4, 5, 6};
  split.cal0 = {7};
  const auto model = fit_weibull_aft(data, split.train);
  const WeightedCalibration cal(data, split, model, 0.5);
  const std::vector<double> grid{1.0, 4.0, 6.0};
  const double x = 0.0;
  const auto p = scp_predict(cal, model, Covariates(&x, 1), grid);
  EXPECT_EQ(p.infinite_weight_candidates, 1u);
  EXPECT_EQ(p.interval.upper(), kInfinity);
}
