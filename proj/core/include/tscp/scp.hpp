#pragma once

#include "tscp/dataset.hpp"
#include "tscp/kaplan_meier.hpp"
#include "tscp/survival_model.hpp"

#include <span>
#include <vector>

namespace tscp {

/// Level-quantile of the discrete law putting mass weights[i] at values[i]
/// and `tail_weight` at +inf (normalized by the total). Returns the smallest
/// value whose cumulative mass reaches `level`, or +inf if only the tail does.
double weighted_quantile(std::span<const double> values, std::span<const double> weights, double tail_weight,
                         double level);

/// Weighted-conformal calibration on the uncensored calibration rows, with
/// inverse-probability-of-censoring weights 1 / G(T_i-) from a marginal
/// Kaplan-Meier fit on all calibration rows.
class WeightedCalibration {
 public:
  WeightedCalibration(const SurvivalDataset& data, const SplitIndices& split, const FittedSurvivalModel& model,
                      double alpha);

  [[nodiscard]] const std::vector<double>& cal_scores() const { return scores_; }
  [[nodiscard]] const std::vector<double>& cal_times() const { return times_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] const KaplanMeierCurve& censor_curve() const { return censor_curve_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  /// Rows of cal1 whose weight would be infinite (G(T_i-) = 0).
  [[nodiscard]] std::size_t dropped() const { return dropped_; }

  /// Weighted quantile of the calibration scores at level 1 - alpha with the
  /// given test-point tail weight. Same value as weighted_quantile, O(log m).
  [[nodiscard]] double threshold(double tail_weight) const;

 private:
  std::vector<double> scores_;
  std::vector<double> times_;
  std::vector<double> weights_;
  KaplanMeierCurve censor_curve_;
  double alpha_;
  std::size_t dropped_ = 0;
  // Scores ascending with cumulative weights, for threshold().
  std::vector<double> sorted_scores_;
  std::vector<double> cumulative_weight_;
};

/// Candidate times: `points` log-spaced values from min(time)/2 to max(time),
/// the last one exactly max(time).
std::vector<double> make_time_grid(const SurvivalDataset& data, std::size_t points = 512);

struct ScpPrediction {
  Interval interval;
  /// Candidates included only because G(t-) = 0 (infinite tail weight).
  std::size_t infinite_weight_candidates = 0;
};

/// Scans `time_grid`, keeping t when |1/2 - F(t|x)| <= threshold(1 / G(t-)),
/// and returns the hull of the kept points. The first grid point stands for
/// everything below it and the last (max observed time) for everything above,
/// so keeping them opens the interval to 0 or +inf respectively.
ScpPrediction scp_predict(const WeightedCalibration& calibration, const FittedSurvivalModel& model, Covariates x,
                          std::span<const double> time_grid);

/// Convenience form that calibrates on the spot.
ScpPrediction scp_predict(const SurvivalDataset& data, const SplitIndices& split, const FittedSurvivalModel& model,
                          double alpha, Covariates x, std::span<const double> time_grid);

}  // namespace tscp
