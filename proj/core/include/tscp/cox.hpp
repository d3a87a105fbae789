#pragma once

#include "tscp/dataset.hpp"
#include "tscp/survival_model.hpp"

#include <Eigen/Core>

#include <vector>

namespace tscp {

struct CoxOptions {
  double ridge = 0.0;  // penalty ridge * |beta_std|^2 / 2 on the standardized scale
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;
  double divergence_threshold = 25.0;  // on standardized coefficients
};

/// Proportional hazards model with a Breslow baseline.
///
/// cdf(x, t) = 1 - exp(-H0(t) * exp((x - centre)' beta)). The baseline is
/// stored relative to the training covariate means, which is the same model
/// as the uncentred form with H0 rescaled. The baseline only jumps at training
/// event times, so the cdf is flat past the last one and inverse_cdf returns
/// +inf for levels above that plateau.
class CoxModel final : public FittedSurvivalModel {
 public:
  CoxModel(Eigen::VectorXd beta, Eigen::VectorXd centre, std::vector<double> jump_times,
           std::vector<double> cumulative_hazard, double train_max_time);

  [[nodiscard]] double cdf(Covariates x, double t) const override;
  [[nodiscard]] double inverse_cdf(Covariates x, double u) const override;
  [[nodiscard]] double max_cdf(Covariates x) const override;
  [[nodiscard]] std::string_view name() const override { return "cox"; }

  /// Coefficients on the original covariate scale.
  [[nodiscard]] const Eigen::VectorXd& beta() const { return beta_; }
  [[nodiscard]] const Eigen::VectorXd& centre() const { return centre_; }
  [[nodiscard]] const std::vector<double>& jump_times() const { return jump_times_; }
  [[nodiscard]] const std::vector<double>& cumulative_hazard() const { return cumulative_hazard_; }
  [[nodiscard]] double train_max_time() const { return train_max_time_; }

  /// Centred linear predictor (x - centre)' beta.
  [[nodiscard]] double linear_predictor(Covariates x) const;
  [[nodiscard]] double baseline_cumulative_hazard(double t) const;

  int iterations = 0;
  double ridge = 0.0;
  double max_abs_gradient = 0.0;

 private:
  [[nodiscard]] double cdf_from_hazard(double hazard, double risk) const;

  Eigen::VectorXd beta_;
  Eigen::VectorXd centre_;
  std::vector<double> jump_times_;
  std::vector<double> cumulative_hazard_;
  double train_max_time_;
};

/// Newton-Raphson with step halving on the Breslow partial log-likelihood,
/// covariates standardized internally. Needs at least two events among `train`.
/// Throws SingularHessian or ConvergenceError.
CoxModel fit_cox(const SurvivalDataset& data, const IndexSet& train, const CoxOptions& options = {});

/// Breslow partial log-likelihood at `beta` (original scale, unpenalized).
double cox_log_likelihood(const SurvivalDataset& data, const IndexSet& rows, const Eigen::VectorXd& beta);
/// Its analytic gradient.
Eigen::VectorXd cox_gradient(const SurvivalDataset& data, const IndexSet& rows, const Eigen::VectorXd& beta);

}  // namespace tscp
