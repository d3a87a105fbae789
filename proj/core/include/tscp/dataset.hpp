#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace tscp {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Covariates = std::span<const double>;
using IndexSet = std::vector<std::size_t>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Right-censored observations (X_i, observed time, event flag).
/// Times are min(T, C); `event` is true when the death was observed.
class SurvivalDataset {
 public:
  /// Throws DataError when a dataset invariant is violated.
  SurvivalDataset(Matrix covariates, std::vector<double> time, std::vector<bool> event);

  [[nodiscard]] std::size_t size() const { return time_.size(); }
  [[nodiscard]] std::size_t dimension() const { return static_cast<std::size_t>(covariates_.cols()); }

  [[nodiscard]] const Matrix& covariates() const { return covariates_; }
  [[nodiscard]] const std::vector<double>& time() const { return time_; }
  [[nodiscard]] const std::vector<bool>& event() const { return event_; }

  [[nodiscard]] Covariates row(std::size_t i) const {
    return {covariates_.data() + i * dimension(), dimension()};
  }
  [[nodiscard]] double time(std::size_t i) const { return time_[i]; }
  [[nodiscard]] bool event(std::size_t i) const { return event_[i]; }

  /// Rows `rows` in the given order.
  [[nodiscard]] SurvivalDataset subset(const IndexSet& rows) const;

 private:
  Matrix covariates_;
  std::vector<double> time_;
  std::vector<bool> event_;
};

/// Train / calibration partition, calibration further split by event flag.
struct SplitIndices {
  IndexSet train;
  IndexSet cal;
  IndexSet cal0;  // censored calibration rows
  IndexSet cal1;  // observed-death calibration rows
};

/// Uniformly random train/calibration partition. |train| = round(f * n).
/// Requires n >= 4, f * n >= 1 and (1 - f) * n >= 2 (ConfigError otherwise).
SplitIndices split_dataset(const SurvivalDataset& data, double train_fraction, std::uint64_t seed);

/// Throws DegenerateCalibration naming the empty stratum, if any.
void require_calibration_strata(const SplitIndices& split);

/// Random permutation of {0..n-1}, deterministic for fixed seed.
IndexSet random_permutation(std::size_t n, std::uint64_t seed);

/// Closed interval [lower, upper] on the half-line; upper may be +inf.
class Interval {
 public:
  /// Throws std::invalid_argument unless 0 <= lower <= upper.
  Interval(double lower, double upper);

  [[nodiscard]] double lower() const { return lower_; }
  [[nodiscard]] double upper() const { return upper_; }
  [[nodiscard]] bool finite_upper() const { return upper_ < kInfinity; }
  [[nodiscard]] bool contains(double t) const { return lower_ <= t && t <= upper_; }
  /// upper - lower; +inf when the upper end is infinite.
  [[nodiscard]] double length() const { return upper_ - lower_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lower_;
  double upper_;
};

/// Output of the two-sided procedure for one subject.
class Prediction {
 public:
  struct TwoSided {
    Interval interval;
  };
  struct LowerOnly {
    double lower;
  };

  static Prediction two_sided(Interval interval) { return Prediction(TwoSided{interval}); }
  /// Throws std::invalid_argument for a negative bound.
  static Prediction lower_only(double lower);

  /// True iff the subject was classified as resembling the uncensored population.
  [[nodiscard]] bool event_class() const { return std::holds_alternative<TwoSided>(value_); }
  [[nodiscard]] const std::variant<TwoSided, LowerOnly>& value() const { return value_; }

  [[nodiscard]] double lower() const;
  /// +inf for LowerOnly.
  [[nodiscard]] double upper() const;
  [[nodiscard]] bool finite_upper() const { return upper() < kInfinity; }
  /// The prediction set as an interval ([lower, +inf) for LowerOnly).
  [[nodiscard]] Interval as_interval() const { return {lower(), upper()}; }
  [[nodiscard]] bool covers(double t) const { return as_interval().contains(t); }

 private:
  explicit Prediction(std::variant<TwoSided, LowerOnly> v) : value_(std::move(v)) {}
  std::variant<TwoSided, LowerOnly> value_;
};

}  // namespace tscp
