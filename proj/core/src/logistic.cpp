#include "tscp/logistic.hpp"

#include "standardize.hpp"
#include "tscp/error.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <optional>
#include <string>

namespace tscp {
namespace {

// log(1 + exp(v)) without overflow.
double softplus(double v) { return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v)); }

double sigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

struct Derivatives {
  double loglik = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

// Design with a leading column of ones; theta = (intercept, beta...).
Derivatives evaluate(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const Eigen::VectorXd& theta, double ridge,
                     bool with_hessian) {
  const auto p = a.cols();
  const Eigen::VectorXd eta = a * theta;
  Derivatives out{0.0, Eigen::VectorXd::Zero(p), Eigen::MatrixXd::Zero(p, with_hessian ? p : 0)};
  Eigen::VectorXd resid(eta.size());
  Eigen::VectorXd weight(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    out.loglik += y(i) * eta(i) - softplus(eta(i));
    const double mu = sigmoid(eta(i));
    resid(i) = y(i) - mu;
    weight(i) = mu * (1.0 - mu);
  }
  out.gradient = a.transpose() * resid;
  if (with_hessian) out.hessian = -(a.transpose() * weight.asDiagonal() * a);
  if (ridge > 0.0) {
    // Intercept unpenalized.
    out.loglik -= 0.5 * ridge * theta.tail(p - 1).squaredNorm();
    out.gradient.tail(p - 1) -= ridge * theta.tail(p - 1);
    if (with_hessian) out.hessian.diagonal().tail(p - 1).array() -= ridge;
  }
  return out;
}

struct Fit {
  Eigen::VectorXd theta;
  Derivatives at;
  int iterations = 0;
};

// nullopt signals divergence (coefficients escaping to infinity).
std::optional<Fit> newton(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double ridge,
                          const LogisticOptions& options) {
  const auto p = a.cols();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  auto current = evaluate(a, y, theta, ridge, true);
  for (int iter = 0;; ++iter) {
    const double gmax = current.gradient.lpNorm<Eigen::Infinity>();
    if (gmax <= options.gradient_tolerance) return Fit{theta, std::move(current), iter};
    if (iter >= options.max_iterations) {
      if (ridge == 0.0) return std::nullopt;
      throw ConvergenceError("fit_logistic: no convergence after " + std::to_string(options.max_iterations) +
                             " iterations (gradient " + std::to_string(gmax) + ")");
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(-current.hessian);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-14 * (1.0 + ldlt.vectorD().maxCoeff())) {
      if (ridge == 0.0) return std::nullopt;
      throw SingularHessian("fit_logistic: singular Hessian");
    }
    const Eigen::VectorXd step = ldlt.solve(current.gradient);
    double scale = 1.0;
    auto next = evaluate(a, y, theta + step, ridge, true);
    for (int h = 0; h < 40 && next.loglik < current.loglik - 1e-12 * (1.0 + std::abs(current.loglik)); ++h) {
      scale *= 0.5;
      next = evaluate(a, y, theta + scale * step, ridge, true);
    }
    theta += scale * step;
    current = std::move(next);
    if (ridge == 0.0 && p > 1 && theta.tail(p - 1).lpNorm<Eigen::Infinity>() > options.divergence_threshold) {
      return std::nullopt;
    }
  }
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd a(z.rows(), z.cols() + 1);
  a.col(0).setOnes();
  a.rightCols(z.cols()) = z;
  return a;
}

Eigen::VectorXd label_vector(const IndexSet& rows, const std::vector<bool>& labels) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) y(static_cast<Eigen::Index>(k)) = labels.at(rows[k]) ? 1.0 : 0.0;
  return y;
}

Eigen::MatrixXd raw_design(const SurvivalDataset& data, const IndexSet& rows) {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(rows.size()), data.covariates().cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    z.row(static_cast<Eigen::Index>(r)) = data.covariates().row(static_cast<Eigen::Index>(rows[r]));
  }
  return z;
}

}  // namespace

LogisticModel::LogisticModel(double intercept, Eigen::VectorXd beta, std::vector<std::size_t> columns)
    : intercept_(intercept), beta_(std::move(beta)), columns_(std::move(columns)) {}

double LogisticModel::predict_prob(Covariates x) const {
  double eta = intercept_;
  for (std::size_t j = 0; j < columns_.size(); ++j) eta += x[columns_[j]] * beta_(static_cast<Eigen::Index>(j));
  return sigmoid(eta);
}

LogisticModel fit_logistic(const SurvivalDataset& data, const IndexSet& train, const std::vector<bool>& labels,
                           const LogisticOptions& options) {
  if (labels.size() != data.size()) throw DataError("fit_logistic: labels must cover every dataset row");
  std::size_t positives = 0;
  for (auto i : train) positives += labels[i] ? 1 : 0;
  if (positives == 0 || positives == train.size()) {
    throw DataError("fit_logistic: both classes must be present in the training rows");
  }
  auto columns = options.columns.empty() ? detail::all_columns(data.dimension()) : options.columns;
  for (auto c : columns) {
    if (c >= data.dimension()) throw ConfigError("fit_logistic: column index out of range");
  }
  const auto design = detail::standardize(data, train, columns);
  // Constant columns keep a zero coefficient.
  std::vector<Eigen::Index> active;
  for (Eigen::Index c = 0; c < design.z.cols(); ++c) {
    if (design.z.col(c).squaredNorm() > 0.0) active.push_back(c);
  }
  Eigen::MatrixXd z_active(design.z.rows(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) z_active.col(static_cast<Eigen::Index>(k)) = design.z.col(active[k]);
  const Eigen::MatrixXd a = with_intercept(z_active);
  const Eigen::VectorXd y = label_vector(train, labels);

  bool separated = false;
  double ridge = 0.0;
  auto fit = newton(a, y, 0.0, options);
  if (!fit) {
    separated = true;
    ridge = options.separation_ridge;
    fit = newton(a, y, ridge, options);
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(design.z.cols());
  for (std::size_t k = 0; k < active.size(); ++k) {
    beta(active[k]) = fit->theta(static_cast<Eigen::Index>(k) + 1) / design.scale(active[k]);
  }
  const double intercept = fit->theta(0) - design.mean.dot(beta);
  LogisticModel model(intercept, beta, std::move(columns));
  model.iterations = fit->iterations;
  model.max_abs_gradient = fit->at.gradient.lpNorm<Eigen::Infinity>();
  model.separated = separated;
  model.ridge = ridge;
  return model;
}

double logistic_log_likelihood(const SurvivalDataset& data, const IndexSet& rows, const std::vector<bool>& labels,
                               double intercept, const Eigen::VectorXd& beta) {
  Eigen::VectorXd theta(beta.size() + 1);
  theta << intercept, beta;
  return evaluate(with_intercept(raw_design(data, rows)), label_vector(rows, labels), theta, 0.0, false).loglik;
}

Eigen::VectorXd logistic_gradient(const SurvivalDataset& data, const IndexSet& rows, const std::vector<bool>& labels,
                                  double intercept, const Eigen::VectorXd& beta) {
  Eigen::VectorXd theta(beta.size() + 1);
  theta << intercept, beta;
  return evaluate(with_intercept(raw_design(data, rows)), label_vector(rows, labels), theta, 0.0, false).gradient;
}

}  // namespace tscp
