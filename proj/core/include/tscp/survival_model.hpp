#pragma once

#include "tscp/dataset.hpp"

#include <string_view>

namespace tscp {

/// Estimated conditional distribution of T given X = x.
///
/// Implementations guarantee that cdf(x, .) is nondecreasing and
/// right-continuous with cdf(x, 0) = 0, and that
///   inverse_cdf(x, u) = inf{ t : cdf(x, t) >= u },
/// returning +inf when u exceeds every attained value. Whenever the inverse is
/// finite, cdf(x, inverse_cdf(x, u)) >= u holds exactly in floating point.
class FittedSurvivalModel {
 public:
  virtual ~FittedSurvivalModel() = default;

  [[nodiscard]] virtual double cdf(Covariates x, double t) const = 0;
  [[nodiscard]] virtual double inverse_cdf(Covariates x, double u) const = 0;
  /// sup_t cdf(x, t); below 1 for models that do not extrapolate.
  [[nodiscard]] virtual double max_cdf(Covariates x) const = 0;
  [[nodiscard]] virtual std::string_view name() const = 0;
};

/// Estimate of P(event = 1 | X = x).
class BinaryClassifier {
 public:
  virtual ~BinaryClassifier() = default;

  [[nodiscard]] virtual double predict_prob(Covariates x) const = 0;
  [[nodiscard]] virtual std::string_view name() const = 0;
};

}  // namespace tscp
