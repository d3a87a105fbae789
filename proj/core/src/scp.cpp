#include "tscp/scp.hpp"

#include "rank.hpp"
#include "tscp/conformal.hpp"
#include "tscp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tscp {

double weighted_quantile(std::span<const double> values, std::span<const double> weights, double tail_weight,
                         double level) {
  if (values.size() != weights.size()) throw std::invalid_argument("weighted_quantile: length mismatch");
  if (values.empty()) throw std::invalid_argument("weighted_quantile: empty input");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0) + tail_weight;
  if (!(total > 0.0)) throw std::invalid_argument("weighted_quantile: total mass must be positive");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  const double target = level * total - detail::kRankSlack * total;
  double cum = 0.0;
  for (auto i : order) {
    cum += weights[i];
    if (cum >= target) return values[i];
  }
  return kInfinity;
}

WeightedCalibration::WeightedCalibration(const SurvivalDataset& data, const SplitIndices& split,
                                         const FittedSurvivalModel& model, double alpha)
    : censor_curve_(censoring_survival(data, split.cal)), alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  for (auto i : split.cal1) {
    const double g = censor_curve_.survival_before(data.time(i));
    if (!(g > 0.0)) {
      ++dropped_;
      continue;
    }
    scores_.push_back(cdf_score(model, data.row(i), data.time(i)));
    times_.push_back(data.time(i));
    weights_.push_back(1.0 / g);
  }
  std::vector<std::size_t> order(scores_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores_[a] < scores_[b]; });
  double cum = 0.0;
  for (auto i : order) {
    sorted_scores_.push_back(scores_[i]);
    cum += weights_[i];
    cumulative_weight_.push_back(cum);
  }
}

double WeightedCalibration::threshold(double tail_weight) const {
  const double total = (cumulative_weight_.empty() ? 0.0 : cumulative_weight_.back()) + tail_weight;
  const double target = (1.0 - alpha_) * total - detail::kRankSlack * total;
  const auto it = std::lower_bound(cumulative_weight_.begin(), cumulative_weight_.end(), target);
  if (it == cumulative_weight_.end()) return kInfinity;
  return sorted_scores_[static_cast<std::size_t>(it - cumulative_weight_.begin())];
}

std::vector<double> make_time_grid(const SurvivalDataset& data, std::size_t points) {
  if (points < 2) throw std::invalid_argument("make_time_grid: need at least 2 points");
  const auto [lo_it, hi_it] = std::minmax_element(data.time().begin(), data.time().end());
  const double lo = std::log(*lo_it / 2.0);
  const double hi = std::log(*hi_it);
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid[k] = std::exp(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  grid.front() = *lo_it / 2.0;
  grid.back() = *hi_it;
  return grid;
}

ScpPrediction scp_predict(const WeightedCalibration& calibration, const FittedSurvivalModel& model, Covariates x,
                          std::span<const double> time_grid) {
  if (time_grid.empty()) throw std::invalid_argument("scp_predict: empty time grid");
  std::size_t flagged = 0;
  std::ptrdiff_t first = -1;
  std::ptrdiff_t last = -1;
  std::size_t best = 0;
  double best_score = kInfinity;
  for (std::size_t k = 0; k < time_grid.size(); ++k) {
    const double t = time_grid[k];
    const double score = cdf_score(model, x, t);
    if (score < best_score) {
      best_score = score;
      best = k;
    }
    const double g = calibration.censor_curve().survival_before(t);
    bool keep = false;
    if (!(g > 0.0)) {
      keep = true;
      ++flagged;
    } else {
      keep = score <= calibration.threshold(1.0 / g);
    }
    if (keep) {
      if (first < 0) first = static_cast<std::ptrdiff_t>(k);
      last = static_cast<std::ptrdiff_t>(k);
    }
  }
  if (first < 0) {
    // Nothing on the grid passes; report the grid point the model finds most typical.
    return {Interval(time_grid[best], time_grid[best]), flagged};
  }
  const auto n = static_cast<std::ptrdiff_t>(time_grid.size());
  const double lower = first == 0 ? 0.0 : time_grid[static_cast<std::size_t>(first)];
  const double upper = last == n - 1 ? kInfinity : time_grid[static_cast<std::size_t>(last)];
  return {Interval(lower, upper), flagged};
}

ScpPrediction scp_predict(const SurvivalDataset& data, const SplitIndices& split, const FittedSurvivalModel& model,
                          double alpha, Covariates x, std::span<const double> time_grid) {
  return scp_predict(WeightedCalibration(data, split, model, alpha), model, x, time_grid);
}

}  // namespace tscp
