#pragma once

#include "tscp/cox.hpp"
#include "tscp/dataset.hpp"
#include "tscp/logistic.hpp"
#include "tscp/rng.hpp"
#include "tscp/weibull_aft.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace tscp::testing {

// Grid-search maximizers computed offline by tests/oracles/compute_oracles.py.
inline constexpr double kCoxOracleBeta = 1.657;
inline constexpr double kWeibullOracleIntercept = 2.1083;
inline constexpr double kWeibullOracleShape = 1.4673;
// Censoring-parameter roots from quadrature, with slopes d(rate)/d(t0).
inline constexpr double kT0Oracle30 = 203.942093;
inline constexpr double kT0Slope30 = -9.526408e-04;
inline constexpr double kT0Oracle50 = 81.039275;
inline constexpr double kT0Slope50 = -2.837815e-03;

inline IndexSet all_rows(std::size_t n) {
  IndexSet rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

inline SurvivalDataset make_dataset(const std::vector<std::vector<double>>& x, std::vector<double> time,
                                    const std::vector<int>& event) {
  const auto n = time.size();
  const auto d = x.empty() ? std::size_t{0} : x.front().size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[i][j];
  }
  std::vector<bool> e(event.begin(), event.end());
  return {std::move(m), std::move(time), std::move(e)};
}

inline SurvivalDataset cox_oracle_data() {
  return make_dataset({{0.5}, {-1.2}, {0.3}, {1.8}, {-0.4}, {0.9}, {-0.7}, {1.1}, {0.0}, {-1.5}},
                      {2, 5, 3, 1, 6, 2, 7, 4, 8, 9}, {1, 1, 0, 1, 1, 1, 0, 1, 1, 0});
}

inline SurvivalDataset weibull_oracle_data() {
  return make_dataset(std::vector<std::vector<double>>(10, std::vector<double>{}),
                      {3.1, 7.4, 1.2, 9.8, 4.4, 2.6, 12.5, 6.0, 5.3, 8.1}, {1, 1, 1, 0, 1, 1, 0, 1, 0, 1});
}

// Random covariates and exponential times with uniform censoring.
inline SurvivalDataset random_survival(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<double> time(n);
  std::vector<bool> event(n);
  for (std::size_t i = 0; i < n; ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double v = rng.normal();
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      eta += 0.4 * v * (j % 2 == 0 ? 1.0 : -1.0);
    }
    const double t = -std::log(1.0 - rng.uniform()) * std::exp(eta);
    const double c = rng.uniform(0.0, 3.0);
    time[i] = std::max(std::min(t, c), 1e-3);
    event[i] = t <= c;
  }
  return {std::move(x), std::move(time), std::move(event)};
}

inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& at, double h = 1e-5) {
  Eigen::VectorXd g(at.size());
  for (Eigen::Index j = 0; j < at.size(); ++j) {
    Eigen::VectorXd up = at;
    Eigen::VectorXd down = at;
    up(j) += h;
    down(j) -= h;
    g(j) = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

// Largest |analytic - numeric| relative to max(1, |numeric|).
inline double relative_gradient_error(const Eigen::VectorXd& analytic, const Eigen::VectorXd& numeric) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < analytic.size(); ++j) {
    worst = std::max(worst, std::abs(analytic(j) - numeric(j)) / std::max(1.0, std::abs(numeric(j))));
  }
  return worst;
}

inline double cox_gradient_check(std::uint64_t seed) {
  const auto data = random_survival(60, 3, seed);
  const auto rows = all_rows(data.size());
  Eigen::VectorXd beta(3);
  beta << 0.3, -0.2, 0.5;
  const auto f = [&](const Eigen::VectorXd& b) { return cox_log_likelihood(data, rows, b); };
  return relative_gradient_error(cox_gradient(data, rows, beta), central_difference(f, beta));
}

inline double weibull_gradient_check(std::uint64_t seed) {
  const auto data = random_survival(60, 2, seed);
  const auto rows = all_rows(data.size());
  Eigen::VectorXd theta(4);
  theta << 0.2, 0.4, -0.3, 0.1;
  const auto f = [&](const Eigen::VectorXd& th) {
    return weibull_log_likelihood(data, rows, th(0), th.segment(1, 2), th(3));
  };
  return relative_gradient_error(weibull_gradient(data, rows, theta(0), theta.segment(1, 2), theta(3)),
                                 central_difference(f, theta));
}

inline double logistic_gradient_check(std::uint64_t seed) {
  const auto data = random_survival(60, 2, seed);
  const auto rows = all_rows(data.size());
  Eigen::VectorXd theta(3);
  theta << -0.3, 0.8, -0.5;
  const auto f = [&](const Eigen::VectorXd& th) {
    return logistic_log_likelihood(data, rows, data.event(), th(0), th.tail(2));
  };
  return relative_gradient_error(logistic_gradient(data, rows, data.event(), theta(0), theta.tail(2)),
                                 central_difference(f, theta));
}

// Smallest atom whose cumulative weight reaches level_num/level_den of the total, by exact integer arithmetic.
inline double brute_weighted_quantile(const std::vector<double>& values, const std::vector<long>& weights, long tail,
                                      long level_num, long level_den) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  const long total = std::accumulate(weights.begin(), weights.end(), tail);
  long cumulative = 0;
  for (auto i : order) {
    cumulative += weights[i];
    if (cumulative * level_den >= level_num * total) return values[i];
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace tscp::testing
