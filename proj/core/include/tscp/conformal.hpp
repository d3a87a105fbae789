#pragma once

#include "tscp/dataset.hpp"
#include "tscp/survival_model.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace tscp {

/// Split-conformal threshold: the k-th smallest score with
/// k = ceil((1 - alpha) (m + 1)), or +inf when k > m. Throws on empty input.
double conformal_quantile(std::span<const double> scores, double alpha);

/// (1 + #{cal >= test}) / (1 + |cal|). Large test scores give small p-values.
double conformal_p_value(std::span<const double> cal_scores, double test_score);

/// |1/2 - F(t | x)|, the two-sided CDF score.
double cdf_score(const FittedSurvivalModel& model, Covariates x, double t);
/// 1/2 - F(t | x), its one-sided counterpart used for the lower bound.
double lower_cdf_score(const FittedSurvivalModel& model, Covariates x, double t);

struct CalibrationOptions {
  double alpha = 0.1;
  /// Fraction of alpha spent on the classifier and on the two-sided set;
  /// the lower bound gets the rest.
  double alpha_split = 0.5;
};

/// Frozen thresholds plus the fitted models they were computed from.
///
/// Subjects whose classifier score clears `q_delta` get the two-sided set
/// {t : |1/2 - F(t|x)| <= q_one}; everyone else gets the naive lower bound
/// {t : 1/2 - F(t|x) <= q_lb}. Thresholds saturate to +inf when a
/// calibration stratum is too small, which yields trivial sets.
class CalibratedPredictor {
 public:
  CalibratedPredictor(std::shared_ptr<const FittedSurvivalModel> model,
                      std::shared_ptr<const BinaryClassifier> classifier, double alpha, double alpha0, double alpha1,
                      std::vector<double> cal0_scores, double q_delta, double q_one, double q_lb);

  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double alpha0() const { return alpha0_; }
  [[nodiscard]] double alpha1() const { return alpha1_; }
  [[nodiscard]] double q_delta() const { return q_delta_; }
  [[nodiscard]] double q_one() const { return q_one_; }
  [[nodiscard]] double q_lb() const { return q_lb_; }
  [[nodiscard]] const FittedSurvivalModel& survival_model() const { return *model_; }
  [[nodiscard]] const BinaryClassifier& classifier() const { return *classifier_; }
  /// Classifier scores of the censored calibration rows, ascending.
  [[nodiscard]] const std::vector<double>& cal0_scores() const { return cal0_scores_; }

  /// 1 - P(event = 0 | x), i.e. the estimated event probability.
  [[nodiscard]] double event_score(Covariates x) const;
  /// Conformal p-value of the null "x is censored".
  [[nodiscard]] double event_p_value(Covariates x) const;
  [[nodiscard]] bool classify_event(Covariates x) const;
  [[nodiscard]] Interval two_sided_interval(Covariates x) const;
  [[nodiscard]] double naive_lpb(Covariates x) const;
  [[nodiscard]] Prediction predict(Covariates x) const;

  /// Degenerate-calibration notices collected while calibrating.
  std::vector<std::string> warnings;

 private:
  std::shared_ptr<const FittedSurvivalModel> model_;
  std::shared_ptr<const BinaryClassifier> classifier_;
  double alpha_;
  double alpha0_;
  double alpha1_;
  std::vector<double> cal0_scores_;
  double q_delta_;
  double q_one_;
  double q_lb_;
};

/// Computes the three calibration thresholds from the calibration rows of
/// `split`. Both models must have been fitted on `split.train` only.
/// Empty strata do not throw: the matching threshold becomes +inf and a
/// warning is recorded. Throws ConfigError for alpha or alpha_split outside (0, 1).
CalibratedPredictor calibrate(const SurvivalDataset& data, const SplitIndices& split,
                              std::shared_ptr<const FittedSurvivalModel> model,
                              std::shared_ptr<const BinaryClassifier> classifier,
                              const CalibrationOptions& options = {});

}  // namespace tscp
