#include "tscp/conformal.hpp"

#include "rank.hpp"
#include "tscp/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tscp {

double conformal_quantile(std::span<const double> scores, double alpha) {
  if (scores.empty()) throw std::invalid_argument("conformal_quantile: empty score vector");
  const auto m = scores.size();
  const double mp1 = static_cast<double>(m + 1);
  const double rank = std::ceil((1.0 - alpha) * mp1 - detail::kRankSlack * mp1);
  if (rank > static_cast<double>(m)) return kInfinity;
  const auto k = static_cast<std::size_t>(std::max(rank, 1.0));
  std::vector<double> sorted(scores.begin(), scores.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
  return sorted[k - 1];
}

double conformal_p_value(std::span<const double> cal_scores, double test_score) {
  const auto at_least = std::count_if(cal_scores.begin(), cal_scores.end(), [&](double s) { return s >= test_score; });
  return (1.0 + static_cast<double>(at_least)) / (1.0 + static_cast<double>(cal_scores.size()));
}

double cdf_score(const FittedSurvivalModel& model, Covariates x, double t) { return std::abs(0.5 - model.cdf(x, t)); }

double lower_cdf_score(const FittedSurvivalModel& model, Covariates x, double t) { return 0.5 - model.cdf(x, t); }

CalibratedPredictor::CalibratedPredictor(std::shared_ptr<const FittedSurvivalModel> model,
                                         std::shared_ptr<const BinaryClassifier> classifier, double alpha,
                                         double alpha0, double alpha1, std::vector<double> cal0_scores,
                                         double q_delta, double q_one, double q_lb)
    : model_(std::move(model)),
      classifier_(std::move(classifier)),
      alpha_(alpha),
      alpha0_(alpha0),
      alpha1_(alpha1),
      cal0_scores_(std::move(cal0_scores)),
      q_delta_(q_delta),
      q_one_(q_one),
      q_lb_(q_lb) {
  std::sort(cal0_scores_.begin(), cal0_scores_.end());
}

double CalibratedPredictor::event_score(Covariates x) const { return classifier_->predict_prob(x); }

double CalibratedPredictor::event_p_value(Covariates x) const {
  const double s = event_score(x);
  const auto at_least = cal0_scores_.end() - std::lower_bound(cal0_scores_.begin(), cal0_scores_.end(), s);
  return (1.0 + static_cast<double>(at_least)) / (1.0 + static_cast<double>(cal0_scores_.size()));
}

bool CalibratedPredictor::classify_event(Covariates x) const { return event_score(x) >= q_delta_; }

Interval CalibratedPredictor::two_sided_interval(Covariates x) const {
  if (std::isinf(q_one_)) return {0.0, kInfinity};
  const double lower = model_->inverse_cdf(x, std::max(0.0, 0.5 - q_one_));
  const double upper = model_->inverse_cdf(x, std::min(1.0, 0.5 + q_one_));
  return {lower, upper};
}

double CalibratedPredictor::naive_lpb(Covariates x) const {
  if (std::isinf(q_lb_)) return 0.0;
  // Level capped at the model's plateau.
  const double level = std::min(0.5 - q_lb_, model_->max_cdf(x));
  if (level <= 0.0) return 0.0;
  const double lb = model_->inverse_cdf(x, level);
  return std::isinf(lb) ? 0.0 : lb;
}

Prediction CalibratedPredictor::predict(Covariates x) const {
  if (classify_event(x)) return Prediction::two_sided(two_sided_interval(x));
  return Prediction::lower_only(naive_lpb(x));
}

CalibratedPredictor calibrate(const SurvivalDataset& data, const SplitIndices& split,
                              std::shared_ptr<const FittedSurvivalModel> model,
                              std::shared_ptr<const BinaryClassifier> classifier, const CalibrationOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(options.alpha_split > 0.0 && options.alpha_split < 1.0)) throw ConfigError("alpha_split must lie in (0, 1)");
  if (!model || !classifier) throw std::invalid_argument("calibrate: null model");
  const double alpha1 = options.alpha * options.alpha_split;
  const double alpha0 = options.alpha * (1.0 - options.alpha_split);

  std::vector<std::string> warnings;

  std::vector<double> cal0_scores;
  cal0_scores.reserve(split.cal0.size());
  for (auto i : split.cal0) cal0_scores.push_back(classifier->predict_prob(data.row(i)));
  double q_delta = kInfinity;
  if (cal0_scores.empty()) {
    warnings.emplace_back("degenerate calibration: cal0 empty; every subject is classified as censored");
  } else {
    q_delta = conformal_quantile(cal0_scores, alpha1);
  }

  std::vector<double> cal1_scores;
  cal1_scores.reserve(split.cal1.size());
  for (auto i : split.cal1) cal1_scores.push_back(cdf_score(*model, data.row(i), data.time(i)));
  double q_one = kInfinity;
  if (cal1_scores.empty()) {
    warnings.emplace_back("degenerate calibration: cal1 empty; two-sided sets are the whole half-line");
  } else {
    q_one = conformal_quantile(cal1_scores, alpha1);
  }

  std::vector<double> lb_scores;
  lb_scores.reserve(split.cal.size());
  for (auto i : split.cal) lb_scores.push_back(lower_cdf_score(*model, data.row(i), data.time(i)));
  const double q_lb = lb_scores.empty() ? kInfinity : conformal_quantile(lb_scores, alpha0);

  CalibratedPredictor predictor(std::move(model), std::move(classifier), options.alpha, alpha0, alpha1,
                                std::move(cal0_scores), q_delta, q_one, q_lb);
  predictor.warnings = std::move(warnings);
  return predictor;
}

}  // namespace tscp
