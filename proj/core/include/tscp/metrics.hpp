#pragma once

#include "tscp/dataset.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tscp {

/// Group-wise evaluation against known survival times. Groups are defined by
/// whether the upper end is finite, not by the classifier output. Empty
/// groups leave their coverage and length fields unset.
struct ExperimentReport {
  std::size_t n_test = 0;
  std::size_t n_two_sided = 0;
  double two_sided_proportion = 0.0;
  std::optional<double> coverage_one_sided;
  std::optional<double> coverage_two_sided;
  std::optional<double> avg_lpb_one_sided;
  std::optional<double> avg_length_two_sided;
  /// Fraction of all subjects whose prediction set contains T.
  std::optional<double> coverage_overall;
  /// Envelope from the observed (time, event) pairs; see evaluate_censored.
  std::optional<double> cov_lo;
  std::optional<double> cov_up;
};

ExperimentReport evaluate_synthetic(std::span<const Prediction> predictions, std::span<const double> truth);

struct CoverageBounds {
  double lo = 0.0;
  double up = 0.0;
};

/// Coverage envelope computable without the latent times of censored rows:
///   lo = 1 - [P(T~ not in C, D=1) + P(D=0, Dhat=1) + P(T~ <= LB, D=0, Dhat=0)]
///   up = 1 - [P(T~ not in C, D=1) + P(T~ >= sup C1, D=0, Dhat=1)]
/// with proportions taken over the supplied rows.
CoverageBounds evaluate_censored(std::span<const Prediction> predictions, std::span<const double> observed_time,
                                 const std::vector<bool>& event, const std::vector<bool>& event_class);

/// Per-group envelopes (each computed within its group) plus the overall one.
struct GroupedBounds {
  CoverageBounds overall;
  std::optional<CoverageBounds> one_sided;
  std::optional<CoverageBounds> two_sided;
  double two_sided_proportion = 0.0;
};

GroupedBounds evaluate_censored_groups(std::span<const Prediction> predictions, std::span<const double> observed_time,
                                       const std::vector<bool>& event, const std::vector<bool>& event_class);

/// Empirical terms of the error decomposition on data with known T and event flags.
struct ErrorComponents {
  std::size_t n = 0;
  std::size_t n_censored = 0;
  std::size_t n_censored_flagged = 0;  // event = 0 but classified 1
  std::size_t n_event = 0;
  std::size_t n_event_missed = 0;  // event = 1 and T outside the two-sided set
  std::size_t n_lpb_missed = 0;    // T <= lower bound
  std::size_t n_missed = 0;        // T outside the final prediction set

  [[nodiscard]] std::optional<double> type1() const;
  [[nodiscard]] std::optional<double> two_sided_miss() const;
  [[nodiscard]] double lpb_miss() const;
  [[nodiscard]] double miscoverage() const;
  /// two_sided_miss * P(D=1) + lpb_miss + type1 * P(D=0), all empirical.
  [[nodiscard]] double decomposition_bound() const;

  ErrorComponents& operator+=(const ErrorComponents& other);
};

/// `two_sided` and `lower_bounds` hold the two-sided set and the lower bound
/// for every subject, whatever it was classified as.
ErrorComponents evaluate_error_components(std::span<const Prediction> predictions,
                                          std::span<const Interval> two_sided,
                                          std::span<const double> lower_bounds, std::span<const double> truth,
                                          const std::vector<bool>& event);

/// Mean and sample sd over the defined entries.
struct SummaryStat {
  std::size_t count = 0;
  std::optional<double> mean;
  std::optional<double> sd;
};

SummaryStat summarize(std::span<const std::optional<double>> values);

}  // namespace tscp
