#pragma once

#include "tscp/dataset.hpp"
#include "tscp/survival_model.hpp"

#include <Eigen/Core>

namespace tscp {

struct WeibullOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-8;
};

/// Weibull accelerated failure time model:
/// F(t | x) = 1 - exp(-(t / lambda(x))^shape), lambda(x) = exp(intercept + x' beta).
/// Extrapolates parametrically, so inverse_cdf is finite for every u < 1.
class WeibullAftModel final : public FittedSurvivalModel {
 public:
  WeibullAftModel(double intercept, Eigen::VectorXd beta, double shape);

  [[nodiscard]] double cdf(Covariates x, double t) const override;
  [[nodiscard]] double inverse_cdf(Covariates x, double u) const override;
  [[nodiscard]] double max_cdf(Covariates) const override { return 1.0; }
  [[nodiscard]] std::string_view name() const override { return "weibull_aft"; }

  [[nodiscard]] double intercept() const { return intercept_; }
  [[nodiscard]] const Eigen::VectorXd& beta() const { return beta_; }
  [[nodiscard]] double shape() const { return shape_; }
  /// log lambda(x).
  [[nodiscard]] double log_scale(Covariates x) const;

  int iterations = 0;
  double max_abs_gradient = 0.0;

 private:
  double intercept_;
  Eigen::VectorXd beta_;
  double shape_;
};

/// Censored maximum likelihood over (intercept, beta, log shape) by Newton with
/// step halving (Levenberg shift when the Hessian is not negative definite).
WeibullAftModel fit_weibull_aft(const SurvivalDataset& data, const IndexSet& train,
                                const WeibullOptions& options = {});

/// Censored log-likelihood at (intercept, beta, log_shape) on the original scale.
double weibull_log_likelihood(const SurvivalDataset& data, const IndexSet& rows, double intercept,
                              const Eigen::VectorXd& beta, double log_shape);
/// Gradient in the order (intercept, beta..., log_shape).
Eigen::VectorXd weibull_gradient(const SurvivalDataset& data, const IndexSet& rows, double intercept,
                                 const Eigen::VectorXd& beta, double log_shape);

}  // namespace tscp
