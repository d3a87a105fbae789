#include "support/fixtures.hpp"
#include "tscp/experiment.hpp"
#include "tscp/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace tscp;

namespace {

Prediction two(double lo, double hi) { return Prediction::two_sided(Interval(lo, hi)); }
Prediction one(double lo) { return Prediction::lower_only(lo); }

std::vector<bool> classes(const std::vector<Prediction>& p) {
  std::vector<bool> out;
  for (const auto& v : p) out.push_back(v.event_class());
  return out;
}

}  // namespace

TEST(EvaluateSynthetic, VacuousBounds) {
  const std::vector<Prediction> p{one(0), one(0), two(0, kInfinity)};
  const std::vector<double> truth{1, 2, 3};
  const auto r = evaluate_synthetic(p, truth);
  EXPECT_EQ(r.coverage_one_sided, 1.0);
  EXPECT_FALSE(r.coverage_two_sided.has_value());
  EXPECT_FALSE(r.avg_length_two_sided.has_value());
  EXPECT_EQ(r.two_sided_proportion, 0.0);
  EXPECT_EQ(r.avg_lpb_one_sided, 0.0);
}

TEST(EvaluateSynthetic, FourPredictions) {
  const std::vector<Prediction> p{two(1, 2), two(1, kInfinity), two(0, 5), two(3, kInfinity)};
  const std::vector<double> truth{1.5, 0.5, 6, 4};
  const auto r = evaluate_synthetic(p, truth);
  EXPECT_EQ(r.n_two_sided, 2u);
  EXPECT_DOUBLE_EQ(*r.coverage_two_sided, 0.5);
  EXPECT_DOUBLE_EQ(*r.coverage_one_sided, 0.5);
  EXPECT_DOUBLE_EQ(r.two_sided_proportion, 0.5);
  EXPECT_DOUBLE_EQ(*r.avg_length_two_sided, 3.0);
  EXPECT_DOUBLE_EQ(*r.avg_lpb_one_sided, 2.0);
  EXPECT_DOUBLE_EQ(*r.coverage_overall, 0.5);
}

TEST(EvaluateCensored, NoCensoredRows) {
  const std::vector<Prediction> p{two(1, 2), one(3), two(0, 5)};
  const std::vector<double> t{1.5, 2, 4};
  const auto b = evaluate_censored(p, t, {true, true, true}, classes(p));
  EXPECT_DOUBLE_EQ(b.lo, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(b.up, 2.0 / 3.0);
}

TEST(EvaluateCensored, AllCensoredTrivialLower) {
  const std::vector<Prediction> p{one(0), one(0)};
  const std::vector<double> t{1, 2};
  const auto b = evaluate_censored(p, t, {false, false}, {false, false});
  EXPECT_EQ(b.lo, 1.0);
  EXPECT_EQ(b.up, 1.0);
}

TEST(EvaluateCensored, SixRowFixture) {
  // Row terms: covered event, missed event, flagged past the upper end, flagged inside,
  // unflagged below the lower bound, unflagged above it.
  const std::vector<Prediction> p{two(1, 3), one(4), two(1, 3), two(1, 6), one(3), one(1)};
  const std::vector<double> t{2, 2, 5, 2, 2, 2};
  const std::vector<bool> event{true, true, false, false, false, false};
  const auto b = evaluate_censored(p, t, event, classes(p));
  EXPECT_DOUBLE_EQ(b.lo, 1.0 - 4.0 / 6.0);
  EXPECT_DOUBLE_EQ(b.up, 1.0 - 2.0 / 6.0);
}

TEST(EvaluateCensored, PermutationInvariant) {
  std::vector<Prediction> p{two(1, 3), one(4), two(1, 3), two(1, 6), one(3), one(1)};
  std::vector<double> t{2, 2, 5, 2, 2, 2};
  std::vector<bool> event{true, true, false, false, false, false};
  const auto a = evaluate_censored(p, t, event, classes(p));
  std::reverse(p.begin(), p.end());
  std::reverse(t.begin(), t.end());
  std::reverse(event.begin(), event.end());
  const auto b = evaluate_censored(p, t, event, classes(p));
  EXPECT_DOUBLE_EQ(a.lo, b.lo);
  EXPECT_DOUBLE_EQ(a.up, b.up);
}

TEST(EvaluateCensored, GroupsSplitByFiniteUpper) {
  const std::vector<Prediction> p{two(1, 3), one(4), two(1, kInfinity)};
  const std::vector<double> t{2, 2, 2};
  const auto g = evaluate_censored_groups(p, t, {true, true, true}, classes(p));
  ASSERT_TRUE(g.two_sided.has_value());
  ASSERT_TRUE(g.one_sided.has_value());
  EXPECT_DOUBLE_EQ(g.two_sided_proportion, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(g.two_sided->lo, 1.0);
  EXPECT_DOUBLE_EQ(g.one_sided->lo, 0.5);
}

TEST(EvaluateCensored, EnvelopeOnSyntheticReplications) {
  ExperimentConfig config;
  config.method = MethodKind::both;
  for (std::size_t rep = 0; rep < 20; ++rep) {
    const auto r = simulate_replication(config, 200.0, rep);
    for (const auto* m : {&*r.twosided, &*r.scp}) {
      ASSERT_LE(*m->report.cov_lo, *m->report.coverage_overall + 1e-12);
      ASSERT_LE(*m->report.coverage_overall, *m->report.cov_up + 1e-12);
    }
  }
}

TEST(ErrorComponents, CountsAndBound) {
  const std::vector<Prediction> p{two(1, 3), one(2), two(1, 2), one(0.5)};
  const std::vector<Interval> two_sided{Interval(1, 3), Interval(1, 4), Interval(1, 2), Interval(0, 9)};
  const std::vector<double> lower{0.5, 2, 0.5, 0.5};
  const std::vector<double> truth{2, 1.5, 5, 0.4};
  const auto c = evaluate_error_components(p, two_sided, lower, truth, {true, true, false, false});
  EXPECT_EQ(c.n, 4u);
  EXPECT_EQ(c.n_event, 2u);
  EXPECT_EQ(c.n_event_missed, 0u);
  EXPECT_EQ(c.n_censored, 2u);
  EXPECT_EQ(c.n_censored_flagged, 1u);
  EXPECT_EQ(c.n_lpb_missed, 2u);
  EXPECT_EQ(c.n_missed, 3u);
  EXPECT_DOUBLE_EQ(*c.type1(), 0.5);
  EXPECT_DOUBLE_EQ(c.miscoverage(), 0.75);
  EXPECT_GE(c.decomposition_bound(), c.miscoverage());
}

TEST(Summarize, SkipsUndefined) {
  const std::vector<std::optional<double>> v{1.0, std::nullopt, 3.0};
  const auto s = summarize(v);
  EXPECT_EQ(s.count, 2u);
  EXPECT_DOUBLE_EQ(*s.mean, 2.0);
  EXPECT_DOUBLE_EQ(*s.sd, std::sqrt(2.0));
  EXPECT_FALSE(summarize(std::vector<std::optional<double>>{std::nullopt}).mean.has_value());
}
