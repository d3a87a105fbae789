#include "tscp/synth.hpp"

#include "tscp/error.hpp"
#include "tscp/rng.hpp"

#include <cmath>
#include <string>

namespace tscp {
namespace {

struct LatentRow {
  double x1;
  double x2;
  double true_time;
  double censor_uniform;
};

LatentRow draw_row(Rng& rng, const SyntheticParams& p) {
  LatentRow r{};
  r.x1 = rng.uniform();
  r.x2 = rng.uniform();
  const double mean = p.beta0 + p.beta[0] * r.x1 + p.beta[1] * r.x2;
  r.true_time = std::exp(rng.normal(mean, 1.0));
  r.censor_uniform = rng.uniform();
  return r;
}

std::vector<LatentRow> draw_latents(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const SyntheticParams p;
  std::vector<LatentRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back(draw_row(rng, p));
  return rows;
}

double rate_on(const std::vector<LatentRow>& rows, double t0) {
  std::size_t censored = 0;
  for (const auto& r : rows) {
    if (r.true_time > 1.0 + (t0 - 1.0) * r.censor_uniform) ++censored;
  }
  return static_cast<double>(censored) / static_cast<double>(rows.size());
}

}  // namespace

SyntheticSample generate(std::size_t n, double t0, std::uint64_t seed) {
  if (n < 1) throw ConfigError("generate: n must be >= 1");
  if (!(t0 > 1.0) || std::isinf(t0)) throw ConfigError("generate: t0 must be finite and > 1");
  SyntheticParams params;
  params.t0 = t0;
  params.seed = seed;

  Rng rng(seed);
  Matrix x(static_cast<Eigen::Index>(n), 2);
  std::vector<double> observed(n);
  std::vector<bool> event(n);
  std::vector<double> true_time(n);
  std::vector<double> censor_time(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = draw_row(rng, params);
    const auto row = static_cast<Eigen::Index>(i);
    x(row, 0) = r.x1;
    x(row, 1) = r.x2;
    true_time[i] = r.true_time;
    censor_time[i] = 1.0 + (t0 - 1.0) * r.censor_uniform;
    observed[i] = std::min(true_time[i], censor_time[i]);
    event[i] = true_time[i] <= censor_time[i];
  }
  return {SurvivalDataset(std::move(x), std::move(observed), std::move(event)), std::move(true_time),
          std::move(censor_time), params};
}

double censoring_rate(double t0, std::uint64_t seed, std::size_t samples) {
  return rate_on(draw_latents(samples, seed), t0);
}

double calibrate_t0(double target_rate, std::uint64_t seed, const T0Options& options) {
  if (!(target_rate > 0.0 && target_rate < 1.0)) throw ConfigError("censoring rate must lie in (0, 1)");
  const auto rows = draw_latents(options.samples, seed);
  double lo = std::log(options.lo);
  double hi = std::log(options.hi);
  const double rate_lo = rate_on(rows, options.lo);
  const double rate_hi = rate_on(rows, options.hi);
  if (target_rate > rate_lo + options.tolerance || target_rate < rate_hi - options.tolerance) {
    throw ConfigError("calibrate_t0: bracket failure, censoring rate " + std::to_string(target_rate) +
                      " is outside [" + std::to_string(rate_hi) + ", " + std::to_string(rate_lo) + "]");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double rate = rate_on(rows, std::exp(mid));
    if (std::abs(rate - target_rate) <= options.tolerance) return std::exp(mid);
    if (rate > target_rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("calibrate_t0: bisection did not reach the tolerance");
}

}  // namespace tscp
