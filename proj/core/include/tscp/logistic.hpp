#pragma once

#include "tscp/dataset.hpp"
#include "tscp/survival_model.hpp"

#include <Eigen/Core>

#include <vector>

namespace tscp {

struct LogisticOptions {
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;
  /// Ridge applied (on the standardized scale) when separation is detected.
  double separation_ridge = 1e-4;
  /// Standardized coefficient magnitude treated as divergence.
  double divergence_threshold = 25.0;
  /// Covariate columns to use; empty means all of them.
  std::vector<std::size_t> columns;
};

/// P(label = 1 | x) = 1 / (1 + exp(-(intercept + x_S' beta))) over the column subset S.
class LogisticModel final : public BinaryClassifier {
 public:
  LogisticModel(double intercept, Eigen::VectorXd beta, std::vector<std::size_t> columns);

  [[nodiscard]] double predict_prob(Covariates x) const override;
  [[nodiscard]] std::string_view name() const override { return "logistic"; }

  [[nodiscard]] double intercept() const { return intercept_; }
  [[nodiscard]] const Eigen::VectorXd& beta() const { return beta_; }
  [[nodiscard]] const std::vector<std::size_t>& columns() const { return columns_; }

  int iterations = 0;
  double max_abs_gradient = 0.0;
  /// Set when the unpenalized fit diverged and the ridge fallback was used.
  bool separated = false;
  double ridge = 0.0;

 private:
  double intercept_;
  Eigen::VectorXd beta_;
  std::vector<std::size_t> columns_;
};

/// Unpenalized maximum likelihood by iteratively reweighted least squares.
/// `labels` is indexed by dataset row. Both classes must occur among `train`
/// (DataError otherwise).
LogisticModel fit_logistic(const SurvivalDataset& data, const IndexSet& train, const std::vector<bool>& labels,
                           const LogisticOptions& options = {});

/// Log-likelihood on the original scale over all covariate columns.
double logistic_log_likelihood(const SurvivalDataset& data, const IndexSet& rows, const std::vector<bool>& labels,
                               double intercept, const Eigen::VectorXd& beta);
/// Gradient in the order (intercept, beta...).
Eigen::VectorXd logistic_gradient(const SurvivalDataset& data, const IndexSet& rows, const std::vector<bool>& labels,
                                  double intercept, const Eigen::VectorXd& beta);

}  // namespace tscp
