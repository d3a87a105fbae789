#include "tscp/cox.hpp"

#include "standardize.hpp"
#include "tscp/error.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tscp {
namespace {

struct Derivatives {
  double loglik = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

// Breslow partial likelihood over a fixed design. Rows are visited in
// decreasing time; a block of tied times joins the risk set before any of its
// deaths is scored.
class PartialLikelihood {
 public:
  PartialLikelihood(Eigen::MatrixXd z, std::vector<double> time, std::vector<bool> event)
      : z_(std::move(z)), time_(std::move(time)), event_(std::move(event)), order_(time_.size()) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) { return time_[a] > time_[b]; });
  }

  [[nodiscard]] Derivatives evaluate(const Eigen::VectorXd& beta, bool with_hessian) const {
    const auto d = z_.cols();
    const Eigen::VectorXd eta = z_ * beta;
    const double shift = eta.size() > 0 ? eta.maxCoeff() : 0.0;

    Derivatives out{0.0, Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d)};
    double s0 = 0.0;
    Eigen::VectorXd s1 = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(d, with_hessian ? d : 0);

    const auto n = order_.size();
    for (std::size_t k = 0; k < n;) {
      const double t = time_[order_[k]];
      std::size_t end = k;
      for (; end < n && time_[order_[end]] == t; ++end) {
        const auto i = static_cast<Eigen::Index>(order_[end]);
        const double w = std::exp(eta(i) - shift);
        s0 += w;
        s1.noalias() += w * z_.row(i).transpose();
        if (with_hessian) s2.noalias() += w * z_.row(i).transpose() * z_.row(i);
      }
      double deaths = 0.0;
      for (std::size_t m = k; m < end; ++m) {
        const auto i = static_cast<Eigen::Index>(order_[m]);
        if (!event_[order_[m]]) continue;
        deaths += 1.0;
        out.loglik += eta(i);
        out.gradient.noalias() += z_.row(i).transpose();
      }
      if (deaths > 0.0) {
        const Eigen::VectorXd mean = s1 / s0;
        out.loglik -= deaths * (std::log(s0) + shift);
        out.gradient.noalias() -= deaths * mean;
        if (with_hessian) out.hessian.noalias() -= deaths * (s2 / s0 - mean * mean.transpose());
      }
      k = end;
    }
    return out;
  }

  [[nodiscard]] const Eigen::MatrixXd& design() const { return z_; }
  [[nodiscard]] const std::vector<double>& time() const { return time_; }
  [[nodiscard]] const std::vector<bool>& event() const { return event_; }

 private:
  Eigen::MatrixXd z_;
  std::vector<double> time_;
  std::vector<bool> event_;
  std::vector<std::size_t> order_;
};

PartialLikelihood make_problem(const SurvivalDataset& data, const IndexSet& rows, Eigen::MatrixXd z) {
  std::vector<double> t;
  std::vector<bool> e;
  for (auto i : rows) {
    t.push_back(data.time(i));
    e.push_back(data.event(i));
  }
  return {std::move(z), std::move(t), std::move(e)};
}

Eigen::MatrixXd raw_design(const SurvivalDataset& data, const IndexSet& rows) {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(rows.size()), data.covariates().cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    z.row(static_cast<Eigen::Index>(r)) = data.covariates().row(static_cast<Eigen::Index>(rows[r]));
  }
  return z;
}

}  // namespace

CoxModel::CoxModel(Eigen::VectorXd beta, Eigen::VectorXd centre, std::vector<double> jump_times,
                   std::vector<double> cumulative_hazard, double train_max_time)
    : beta_(std::move(beta)),
      centre_(std::move(centre)),
      jump_times_(std::move(jump_times)),
      cumulative_hazard_(std::move(cumulative_hazard)),
      train_max_time_(train_max_time) {}

double CoxModel::linear_predictor(Covariates x) const {
  double lp = 0.0;
  for (Eigen::Index j = 0; j < beta_.size(); ++j) {
    lp += (x[static_cast<std::size_t>(j)] - centre_(j)) * beta_(j);
  }
  return lp;
}

double CoxModel::baseline_cumulative_hazard(double t) const {
  const auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return 0.0;
  return cumulative_hazard_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

double CoxModel::cdf_from_hazard(double hazard, double risk) const { return -std::expm1(-hazard * risk); }

double CoxModel::cdf(Covariates x, double t) const {
  return cdf_from_hazard(baseline_cumulative_hazard(t), std::exp(linear_predictor(x)));
}

double CoxModel::max_cdf(Covariates x) const {
  if (cumulative_hazard_.empty()) return 0.0;
  return cdf_from_hazard(cumulative_hazard_.back(), std::exp(linear_predictor(x)));
}

double CoxModel::inverse_cdf(Covariates x, double u) const {
  if (u <= 0.0) return 0.0;
  const double risk = std::exp(linear_predictor(x));
  // First jump whose cdf value reaches u; cdf is monotone in the jump index.
  std::size_t lo = 0;
  std::size_t hi = jump_times_.size();
  while (lo < hi) {
    const auto mid = lo + (hi - lo) / 2;
    if (cdf_from_hazard(cumulative_hazard_[mid], risk) >= u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo == jump_times_.size() ? kInfinity : jump_times_[lo];
}

CoxModel fit_cox(const SurvivalDataset& data, const IndexSet& train, const CoxOptions& options) {
  const auto events = std::count_if(train.begin(), train.end(), [&](auto i) { return data.event(i); });
  if (events < 2) throw DataError("fit_cox: needs at least 2 events in the training rows");

  const auto columns = detail::all_columns(data.dimension());
  auto design = detail::standardize(data, train, columns);
  const auto problem = make_problem(data, train, design.z);
  const auto d = design.z.cols();

  auto penalized = [&](const Eigen::VectorXd& b, bool hess) {
    auto out = problem.evaluate(b, hess);
    out.loglik -= 0.5 * options.ridge * b.squaredNorm();
    out.gradient -= options.ridge * b;
    if (hess) out.hessian.diagonal().array() -= options.ridge;
    return out;
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  auto current = penalized(beta, true);
  int iter = 0;
  for (;; ++iter) {
    const double gmax = d > 0 ? current.gradient.lpNorm<Eigen::Infinity>() : 0.0;
    if (gmax <= options.gradient_tolerance) break;
    if (iter >= options.max_iterations) {
      throw ConvergenceError("fit_cox: no convergence after " + std::to_string(options.max_iterations) +
                             " iterations (gradient " + std::to_string(gmax) + ")");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(-current.hessian);
    if (llt.info() != Eigen::Success) {
      throw SingularHessian("fit_cox: singular Hessian; consider a positive ridge");
    }
    const Eigen::VectorXd step = llt.solve(current.gradient);
    double scale = 1.0;
    auto next = penalized(beta + step, true);
    for (int h = 0; h < 40 && !(next.loglik >= current.loglik - 1e-12 * (1.0 + std::abs(current.loglik))); ++h) {
      scale *= 0.5;
      next = penalized(beta + scale * step, true);
    }
    beta += scale * step;
    current = std::move(next);
    if (d > 0 && beta.lpNorm<Eigen::Infinity>() > options.divergence_threshold) {
      throw ConvergenceError("fit_cox: coefficients diverge (monotone likelihood); consider a positive ridge");
    }
  }

  // Breslow baseline over the centred linear predictor.
  const Eigen::VectorXd eta = design.z * beta;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& t = problem.time();
  const auto& e = problem.event();
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return t[a] < t[b]; });
  std::vector<double> at_risk(order.size());
  double acc = 0.0;
  for (std::size_t k = order.size(); k-- > 0;) {
    acc += std::exp(eta(static_cast<Eigen::Index>(order[k])));
    at_risk[k] = acc;
  }
  std::vector<double> jumps;
  std::vector<double> hazard;
  double cum = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    const double tk = t[order[k]];
    const double risk = at_risk[k];
    double deaths = 0.0;
    for (; k < order.size() && t[order[k]] == tk; ++k) {
      if (e[order[k]]) deaths += 1.0;
    }
    if (deaths > 0.0) {
      cum += deaths / risk;
      jumps.push_back(tk);
      hazard.push_back(cum);
    }
  }

  const Eigen::VectorXd beta_original = beta.cwiseQuotient(design.scale);
  const double tmax = *std::max_element(t.begin(), t.end());
  CoxModel model(beta_original, design.mean, std::move(jumps), std::move(hazard), tmax);
  model.iterations = iter;
  model.ridge = options.ridge;
  model.max_abs_gradient = d > 0 ? current.gradient.lpNorm<Eigen::Infinity>() : 0.0;
  return model;
}

double cox_log_likelihood(const SurvivalDataset& data, const IndexSet& rows, const Eigen::VectorXd& beta) {
  return make_problem(data, rows, raw_design(data, rows)).evaluate(beta, false).loglik;
}

Eigen::VectorXd cox_gradient(const SurvivalDataset& data, const IndexSet& rows, const Eigen::VectorXd& beta) {
  return make_problem(data, rows, raw_design(data, rows)).evaluate(beta, false).gradient;
}

}  // namespace tscp
