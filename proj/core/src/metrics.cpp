#include "tscp/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace tscp {
namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ExperimentReport evaluate_synthetic(std::span<const Prediction> predictions, std::span<const double> truth) {
  if (predictions.size() != truth.size()) throw std::invalid_argument("evaluate_synthetic: length mismatch");
  ExperimentReport r;
  r.n_test = predictions.size();
  std::size_t covered_two = 0;
  std::size_t covered_one = 0;
  std::size_t covered = 0;
  double lpb_sum = 0.0;
  double length_sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& p = predictions[i];
    const double t = truth[i];
    if (p.covers(t)) ++covered;
    if (p.finite_upper()) {
      ++r.n_two_sided;
      if (p.covers(t)) ++covered_two;
      length_sum += p.upper() - p.lower();
    } else {
      if (p.lower() <= t) ++covered_one;
      lpb_sum += p.lower();
    }
  }
  const auto n_one = r.n_test - r.n_two_sided;
  r.two_sided_proportion = r.n_test == 0 ? 0.0 : static_cast<double>(r.n_two_sided) / static_cast<double>(r.n_test);
  r.coverage_two_sided = ratio(covered_two, r.n_two_sided);
  r.coverage_one_sided = ratio(covered_one, n_one);
  if (r.n_two_sided > 0) r.avg_length_two_sided = length_sum / static_cast<double>(r.n_two_sided);
  if (n_one > 0) r.avg_lpb_one_sided = lpb_sum / static_cast<double>(n_one);
  r.coverage_overall = ratio(covered, r.n_test);
  return r;
}

CoverageBounds evaluate_censored(std::span<const Prediction> predictions, std::span<const double> observed_time,
                                 const std::vector<bool>& event, const std::vector<bool>& event_class) {
  const auto n = predictions.size();
  if (observed_time.size() != n || event.size() != n || event_class.size() != n) {
    throw std::invalid_argument("evaluate_censored: length mismatch");
  }
  if (n == 0) return {1.0, 1.0};
  std::size_t event_missed = 0;
  std::size_t censored_flagged = 0;
  std::size_t censored_below_lb = 0;
  std::size_t censored_beyond_upper = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = predictions[i];
    const double t = observed_time[i];
    if (event[i]) {
      if (!p.covers(t)) ++event_missed;
    } else if (event_class[i]) {
      ++censored_flagged;
      if (t >= p.upper()) ++censored_beyond_upper;
    } else if (t <= p.lower()) {
      ++censored_below_lb;
    }
  }
  const double nd = static_cast<double>(n);
  return {1.0 - static_cast<double>(event_missed + censored_flagged + censored_below_lb) / nd,
          1.0 - static_cast<double>(event_missed + censored_beyond_upper) / nd};
}

GroupedBounds evaluate_censored_groups(std::span<const Prediction> predictions, std::span<const double> observed_time,
                                       const std::vector<bool>& event, const std::vector<bool>& event_class) {
  GroupedBounds out;
  out.overall = evaluate_censored(predictions, observed_time, event, event_class);
  std::vector<Prediction> group_pred[2];
  std::vector<double> group_time[2];
  std::vector<bool> group_event[2];
  std::vector<bool> group_class[2];
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const int g = predictions[i].finite_upper() ? 1 : 0;
    group_pred[g].push_back(predictions[i]);
    group_time[g].push_back(observed_time[i]);
    group_event[g].push_back(event[i]);
    group_class[g].push_back(event_class[i]);
  }
  if (!group_pred[0].empty()) {
    out.one_sided = evaluate_censored(group_pred[0], group_time[0], group_event[0], group_class[0]);
  }
  if (!group_pred[1].empty()) {
    out.two_sided = evaluate_censored(group_pred[1], group_time[1], group_event[1], group_class[1]);
  }
  out.two_sided_proportion =
      predictions.empty() ? 0.0 : static_cast<double>(group_pred[1].size()) / static_cast<double>(predictions.size());
  return out;
}

std::optional<double> ErrorComponents::type1() const { return ratio(n_censored_flagged, n_censored); }
std::optional<double> ErrorComponents::two_sided_miss() const { return ratio(n_event_missed, n_event); }
double ErrorComponents::lpb_miss() const { return n == 0 ? 0.0 : static_cast<double>(n_lpb_missed) / static_cast<double>(n); }
double ErrorComponents::miscoverage() const { return n == 0 ? 0.0 : static_cast<double>(n_missed) / static_cast<double>(n); }

double ErrorComponents::decomposition_bound() const {
  if (n == 0) return 0.0;
  const double nd = static_cast<double>(n);
  // Each product of a conditional rate with its base rate is a joint proportion.
  return static_cast<double>(n_event_missed) / nd + lpb_miss() + static_cast<double>(n_censored_flagged) / nd;
}

ErrorComponents& ErrorComponents::operator+=(const ErrorComponents& o) {
  n += o.n;
  n_censored += o.n_censored;
  n_censored_flagged += o.n_censored_flagged;
  n_event += o.n_event;
  n_event_missed += o.n_event_missed;
  n_lpb_missed += o.n_lpb_missed;
  n_missed += o.n_missed;
  return *this;
}

ErrorComponents evaluate_error_components(std::span<const Prediction> predictions,
                                          std::span<const Interval> two_sided,
                                          std::span<const double> lower_bounds, std::span<const double> truth,
                                          const std::vector<bool>& event) {
  const auto n = predictions.size();
  if (two_sided.size() != n || lower_bounds.size() != n || truth.size() != n || event.size() != n) {
    throw std::invalid_argument("evaluate_error_components: length mismatch");
  }
  ErrorComponents c;
  c.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = truth[i];
    if (!predictions[i].covers(t)) ++c.n_missed;
    if (t <= lower_bounds[i]) ++c.n_lpb_missed;
    if (event[i]) {
      ++c.n_event;
      if (!two_sided[i].contains(t)) ++c.n_event_missed;
    } else {
      ++c.n_censored;
      if (predictions[i].event_class()) ++c.n_censored_flagged;
    }
  }
  return c;
}

SummaryStat summarize(std::span<const std::optional<double>> values) {
  SummaryStat s;
  double sum = 0.0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++s.count;
    }
  }
  if (s.count == 0) return s;
  const double mean = sum / static_cast<double>(s.count);
  s.mean = mean;
  if (s.count > 1) {
    double ss = 0.0;
    for (const auto& v : values) {
      if (v) ss += (*v - mean) * (*v - mean);
    }
    s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

}  // namespace tscp
