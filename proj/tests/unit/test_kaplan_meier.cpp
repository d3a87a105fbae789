#include "support/fixtures.hpp"
#include "tscp/kaplan_meier.hpp"

#include <gtest/gtest.h>

using namespace tscp;

TEST(KaplanMeier, NoCensoring) {
  const std::vector<double> t{1, 2, 3};
  const auto km = fit_kaplan_meier(t, {true, true, true});
  EXPECT_EQ(km.survival(1), 2.0 / 3.0);
  EXPECT_EQ(km.survival(2), 1.0 / 3.0);
  EXPECT_EQ(km.survival(3), 0.0);
  EXPECT_EQ(km.survival(0.5), 1.0);
}

TEST(KaplanMeier, MiddleCensored) {
  const std::vector<double> t{1, 2, 3};
  const auto km = fit_kaplan_meier(t, {true, false, true});
  EXPECT_EQ(km.survival(1), 2.0 / 3.0);
  EXPECT_EQ(km.survival(2), 2.0 / 3.0);
  EXPECT_EQ(km.survival(3), 0.0);
  EXPECT_EQ(km.survival_before(3), 2.0 / 3.0);
  EXPECT_EQ(km.survival_before(1), 1.0);
}

TEST(KaplanMeier, AllCensoredIsFlat) {
  const std::vector<double> t{1, 2, 3};
  const auto km = fit_kaplan_meier(t, {false, false, false});
  for (double s : {0.0, 1.0, 2.5, 100.0}) EXPECT_EQ(km.survival(s), 1.0);
}

TEST(KaplanMeier, TiedTimes) {
  const std::vector<double> t{2, 2, 2, 5};
  const auto km = fit_kaplan_meier(t, {true, true, false, true});
  EXPECT_DOUBLE_EQ(km.survival(2), 0.5);
  EXPECT_DOUBLE_EQ(km.survival(5), 0.0);
}

TEST(CensoringSurvival, AllEventsGivesOne) {
  const auto data = tscp::testing::make_dataset({{0}, {0}, {0}}, {1, 2, 3}, {1, 1, 1});
  const auto g = censoring_survival(data, {0, 1, 2});
  EXPECT_EQ(g.survival(10), 1.0);
}

TEST(CensoringSurvival, AllCensoredIsEmpiricalSurvival) {
  const auto data = tscp::testing::make_dataset({{0}, {0}, {0}, {0}}, {4, 1, 3, 2}, {0, 0, 0, 0});
  const auto g = censoring_survival(data, {0, 1, 2, 3});
  EXPECT_DOUBLE_EQ(g.survival(1), 0.75);
  EXPECT_DOUBLE_EQ(g.survival(2.5), 0.5);
  EXPECT_DOUBLE_EQ(g.survival(3), 0.25);
  EXPECT_DOUBLE_EQ(g.survival(4), 0.0);
}

TEST(CensoringSurvival, MixedSixRows) {
  // Flipped indicators 0,1,0,1,1,0: risk sets 5, 3, 2 at times 2, 4, 5.
  const auto data =
      tscp::testing::make_dataset(std::vector<std::vector<double>>(6, {0.0}), {1, 2, 3, 4, 5, 6}, {1, 0, 1, 0, 0, 1});
  const auto g = censoring_survival(data, tscp::testing::all_rows(6));
  EXPECT_DOUBLE_EQ(g.survival(1), 1.0);
  EXPECT_DOUBLE_EQ(g.survival(2), 4.0 / 5.0);
  EXPECT_DOUBLE_EQ(g.survival(3), 4.0 / 5.0);
  EXPECT_DOUBLE_EQ(g.survival(4), 8.0 / 15.0);
  EXPECT_DOUBLE_EQ(g.survival(5), 4.0 / 15.0);
  EXPECT_DOUBLE_EQ(g.survival(6), 4.0 / 15.0);
  EXPECT_DOUBLE_EQ(g.survival_before(4), 4.0 / 5.0);
  EXPECT_DOUBLE_EQ(g.survival_before(2), 1.0);
}

TEST(CensoringSurvival, RowsSelectSubset) {
  const auto data = tscp::testing::make_dataset({{0}, {0}, {0}, {0}}, {1, 2, 3, 4}, {0, 1, 0, 1});
  const auto g = censoring_survival(data, {1, 2, 3});
  EXPECT_DOUBLE_EQ(g.survival(1), 1.0);
  EXPECT_DOUBLE_EQ(g.survival(3), 0.5);
}
