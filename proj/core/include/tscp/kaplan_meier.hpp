#pragma once

#include "tscp/dataset.hpp"

#include <span>
#include <vector>

namespace tscp {

/// Right-continuous step function S(t) with S(0) = 1, jumping at `jump_times`.
class KaplanMeierCurve {
 public:
  KaplanMeierCurve() = default;
  KaplanMeierCurve(std::vector<double> jump_times, std::vector<double> survival_values);

  [[nodiscard]] const std::vector<double>& jump_times() const { return jump_times_; }
  [[nodiscard]] const std::vector<double>& survival_values() const { return survival_values_; }

  /// S(t).
  [[nodiscard]] double survival(double t) const;
  /// S(t-), the left limit.
  [[nodiscard]] double survival_before(double t) const;

 private:
  std::vector<double> jump_times_;
  std::vector<double> survival_values_;
};

/// Product-limit estimator; tied times are aggregated and subjects censored
/// at a death time remain in that time's risk set.
KaplanMeierCurve fit_kaplan_meier(std::span<const double> time, const std::vector<bool>& event);

/// Kaplan-Meier on flipped indicators over `rows`: estimates G(t) = P(C > t).
KaplanMeierCurve censoring_survival(const SurvivalDataset& data, const IndexSet& rows);

}  // namespace tscp
