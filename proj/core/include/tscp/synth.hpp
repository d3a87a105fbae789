#pragma once

#include "tscp/dataset.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace tscp {

struct SyntheticParams {
  double beta0 = 3.0;
  std::array<double, 2> beta{3.0, -2.0};
  double t0 = 2.0;
  std::uint64_t seed = 0;
};

/// Observed data plus the latent survival and censoring times.
struct SyntheticSample {
  SurvivalDataset dataset;
  std::vector<double> true_time;
  std::vector<double> censor_time;
  SyntheticParams params;
};

/// X ~ U[0,1]^2, log T | X ~ N(3 + 3 x1 - 2 x2, 1), C ~ U[1, t0].
/// Each row consumes four draws in the order x1, x2, normal, censoring uniform.
/// Requires n >= 1 and t0 > 1 (ConfigError otherwise).
SyntheticSample generate(std::size_t n, double t0, std::uint64_t seed);

/// Monte Carlo estimate of P(T > C) with common random numbers across t0.
double censoring_rate(double t0, std::uint64_t seed, std::size_t samples = 200000);

struct T0Options {
  double lo = 1.001;
  double hi = 1e4;
  double tolerance = 0.005;
  std::size_t samples = 200000;
};

/// Bisection (in log t0) for the t0 whose Monte Carlo censoring rate is within
/// `tolerance` of `target_rate`. Rate decreases in t0. Throws ConfigError when
/// the target is outside the rates attained at the bracket ends.
double calibrate_t0(double target_rate, std::uint64_t seed, const T0Options& options = {});

}  // namespace tscp
