#include "tscp/weibull_aft.hpp"

#include "standardize.hpp"
#include "tscp/error.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tscp {
namespace {

struct Derivatives {
  double loglik = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

// theta = (intercept, beta..., s) with shape = exp(s). Per row, with
// eta = intercept + z'beta and w = shape * (log t - eta):
//   l = delta * (s + w - log t) - exp(w).
Derivatives evaluate(const Eigen::MatrixXd& z, const Eigen::VectorXd& log_t, const std::vector<bool>& event,
                     const Eigen::VectorXd& theta, bool with_hessian) {
  const auto d = z.cols();
  const auto p = d + 2;
  const double s = theta(p - 1);
  const double shape = std::exp(s);
  Derivatives out{0.0, Eigen::VectorXd::Zero(p), Eigen::MatrixXd::Zero(p, with_hessian ? p : 0)};
  Eigen::VectorXd row(p);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double eta = theta(0) + z.row(i).dot(theta.segment(1, d));
    const double w = shape * (log_t(i) - eta);
    const double ew = std::exp(w);
    const double delta = event[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    out.loglik += delta * (s + w - log_t(i)) - ew;

    const double d_eta = shape * (ew - delta);
    const double d_s = delta + (delta - ew) * w;
    out.gradient(0) += d_eta;
    out.gradient.segment(1, d) += d_eta * z.row(i).transpose();
    out.gradient(p - 1) += d_s;
    if (with_hessian) {
      const double h_ee = -shape * shape * ew;
      const double h_es = shape * (ew - delta) + shape * ew * w;
      const double h_ss = -ew * w * w + (delta - ew) * w;
      row(0) = 1.0;
      row.segment(1, d) = z.row(i).transpose();
      out.hessian.topLeftCorner(d + 1, d + 1).noalias() += h_ee * row.head(d + 1) * row.head(d + 1).transpose();
      out.hessian.col(p - 1).head(d + 1) += h_es * row.head(d + 1);
      out.hessian(p - 1, p - 1) += h_ss;
    }
  }
  if (with_hessian) out.hessian.row(p - 1).head(d + 1) = out.hessian.col(p - 1).head(d + 1).transpose();
  return out;
}

Eigen::VectorXd log_times(const SurvivalDataset& data, const IndexSet& rows) {
  Eigen::VectorXd lt(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) lt(static_cast<Eigen::Index>(k)) = std::log(data.time(rows[k]));
  return lt;
}

std::vector<bool> events(const SurvivalDataset& data, const IndexSet& rows) {
  std::vector<bool> e;
  e.reserve(rows.size());
  for (auto i : rows) e.push_back(data.event(i));
  return e;
}

Eigen::MatrixXd raw_design(const SurvivalDataset& data, const IndexSet& rows) {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(rows.size()), data.covariates().cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    z.row(static_cast<Eigen::Index>(r)) = data.covariates().row(static_cast<Eigen::Index>(rows[r]));
  }
  return z;
}

Eigen::VectorXd pack(double intercept, const Eigen::VectorXd& beta, double log_shape) {
  Eigen::VectorXd theta(beta.size() + 2);
  theta(0) = intercept;
  theta.segment(1, beta.size()) = beta;
  theta(beta.size() + 1) = log_shape;
  return theta;
}

}  // namespace

WeibullAftModel::WeibullAftModel(double intercept, Eigen::VectorXd beta, double shape)
    : intercept_(intercept), beta_(std::move(beta)), shape_(shape) {}

double WeibullAftModel::log_scale(Covariates x) const {
  double eta = intercept_;
  for (Eigen::Index j = 0; j < beta_.size(); ++j) eta += x[static_cast<std::size_t>(j)] * beta_(j);
  return eta;
}

double WeibullAftModel::cdf(Covariates x, double t) const {
  if (t <= 0.0) return 0.0;
  if (std::isinf(t)) return 1.0;
  return -std::expm1(-std::exp(shape_ * (std::log(t) - log_scale(x))));
}

double WeibullAftModel::inverse_cdf(Covariates x, double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return kInfinity;
  double t = std::exp(log_scale(x) + std::log(-std::log1p(-u)) / shape_);
  // Snap to the smallest float whose cdf reaches u.
  for (int k = 0; k < 64 && cdf(x, t) < u; ++k) t = std::nextafter(t, kInfinity);
  for (int k = 0; k < 64 && t > 0.0 && cdf(x, std::nextafter(t, 0.0)) >= u; ++k) t = std::nextafter(t, 0.0);
  return t;
}

WeibullAftModel fit_weibull_aft(const SurvivalDataset& data, const IndexSet& train, const WeibullOptions& options) {
  const auto n_events = std::count_if(train.begin(), train.end(), [&](auto i) { return data.event(i); });
  if (n_events < 2) throw DataError("fit_weibull_aft: needs at least 2 events in the training rows");

  const auto columns = detail::all_columns(data.dimension());
  const auto design = detail::standardize(data, train, columns);
  const Eigen::VectorXd lt = log_times(data, train);
  const auto ev = events(data, train);
  const auto d = design.z.cols();
  const auto p = d + 2;

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  theta(0) = std::log(lt.array().exp().mean());

  auto current = evaluate(design.z, lt, ev, theta, true);
  int iter = 0;
  for (;; ++iter) {
    const double gmax = current.gradient.lpNorm<Eigen::Infinity>();
    if (gmax <= options.gradient_tolerance) break;
    if (iter >= options.max_iterations) {
      throw ConvergenceError("fit_weibull_aft: no convergence after " + std::to_string(options.max_iterations) +
                             " iterations (gradient " + std::to_string(gmax) + ")");
    }
    Eigen::MatrixXd neg_h = -current.hessian;
    double shift = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt(neg_h);
    while (llt.info() != Eigen::Success) {
      shift = shift == 0.0 ? 1e-6 * (1.0 + neg_h.diagonal().cwiseAbs().maxCoeff()) : shift * 10.0;
      if (!std::isfinite(shift)) throw SingularHessian("fit_weibull_aft: Hessian cannot be regularized");
      llt.compute(neg_h + shift * Eigen::MatrixXd::Identity(p, p));
    }
    const Eigen::VectorXd step = llt.solve(current.gradient);
    double scale = 1.0;
    auto next = evaluate(design.z, lt, ev, theta + step, true);
    auto worse = [&](const Derivatives& cand) {
      return !std::isfinite(cand.loglik) || cand.loglik < current.loglik - 1e-12 * (1.0 + std::abs(current.loglik));
    };
    for (int h = 0; h < 50 && worse(next); ++h) {
      scale *= 0.5;
      next = evaluate(design.z, lt, ev, theta + scale * step, true);
    }
    theta += scale * step;
    current = std::move(next);
  }

  const Eigen::VectorXd beta = theta.segment(1, d).cwiseQuotient(design.scale);
  const double intercept = theta(0) - design.mean.dot(beta);
  WeibullAftModel model(intercept, beta, std::exp(theta(p - 1)));
  model.iterations = iter;
  model.max_abs_gradient = current.gradient.lpNorm<Eigen::Infinity>();
  return model;
}

double weibull_log_likelihood(const SurvivalDataset& data, const IndexSet& rows, double intercept,
                              const Eigen::VectorXd& beta, double log_shape) {
  return evaluate(raw_design(data, rows), log_times(data, rows), events(data, rows), pack(intercept, beta, log_shape),
                  false)
      .loglik;
}

Eigen::VectorXd weibull_gradient(const SurvivalDataset& data, const IndexSet& rows, double intercept,
                                 const Eigen::VectorXd& beta, double log_shape) {
  return evaluate(raw_design(data, rows), log_times(data, rows), events(data, rows), pack(intercept, beta, log_shape),
                  false)
      .gradient;
}

}  // namespace tscp
