#include "tscp/dataset.hpp"

#include "tscp/error.hpp"
#include "tscp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tscp {

SurvivalDataset::SurvivalDataset(Matrix covariates, std::vector<double> time, std::vector<bool> event)
    : covariates_(std::move(covariates)), time_(std::move(time)), event_(std::move(event)) {
  const auto n = time_.size();
  if (n == 0) throw DataError("dataset is empty");
  if (event_.size() != n || static_cast<std::size_t>(covariates_.rows()) != n) {
    throw DataError("row count mismatch: covariates " + std::to_string(covariates_.rows()) + ", time " +
                    std::to_string(n) + ", event " + std::to_string(event_.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(time_[i]) || time_[i] <= 0.0) {
      throw DataError("row " + std::to_string(i) + ": time must be positive and finite");
    }
  }
  if (!covariates_.allFinite()) throw DataError("covariates contain missing or non-finite values");
}

SurvivalDataset SurvivalDataset::subset(const IndexSet& rows) const {
  Matrix x(static_cast<Eigen::Index>(rows.size()), covariates_.cols());
  std::vector<double> t;
  std::vector<bool> e;
  t.reserve(rows.size());
  e.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto i = rows[k];
    x.row(static_cast<Eigen::Index>(k)) = covariates_.row(static_cast<Eigen::Index>(i));
    t.push_back(time_[i]);
    e.push_back(event_[i]);
  }
  return {std::move(x), std::move(t), std::move(e)};
}

IndexSet random_permutation(std::size_t n, std::uint64_t seed) {
  IndexSet perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.below(i)]);
  }
  return perm;
}

SplitIndices split_dataset(const SurvivalDataset& data, double train_fraction, std::uint64_t seed) {
  const auto n = data.size();
  const auto nd = static_cast<double>(n);
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  if (n < 4 || train_fraction * nd < 1.0 || (1.0 - train_fraction) * nd < 2.0) {
    throw ConfigError("split needs n >= 4, at least 1 training row and 2 calibration rows (n = " +
                      std::to_string(n) + ")");
  }
  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * nd));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 2);

  const auto perm = random_permutation(n, seed);
  SplitIndices split;
  split.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.cal.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.cal.begin(), split.cal.end());
  for (auto i : split.cal) (data.event(i) ? split.cal1 : split.cal0).push_back(i);
  return split;
}

void require_calibration_strata(const SplitIndices& split) {
  if (split.cal0.empty()) throw DegenerateCalibration("degenerate calibration: cal0 empty");
  if (split.cal1.empty()) throw DegenerateCalibration("degenerate calibration: cal1 empty");
}

Interval::Interval(double lower, double upper) : lower_(lower), upper_(upper) {
  if (!(lower >= 0.0) || !(lower <= upper) || std::isnan(upper)) {
    throw std::invalid_argument("interval requires 0 <= lower <= upper");
  }
}

Prediction Prediction::lower_only(double lower) {
  if (!(lower >= 0.0) || std::isinf(lower)) throw std::invalid_argument("lower bound must be finite and >= 0");
  return Prediction(LowerOnly{lower});
}

double Prediction::lower() const {
  return std::visit(
      [](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, TwoSided>) {
          return v.interval.lower();
        } else {
          return v.lower;
        }
      },
      value_);
}

double Prediction::upper() const {
  if (const auto* two = std::get_if<TwoSided>(&value_)) return two->interval.upper();
  return kInfinity;
}

}  // namespace tscp
