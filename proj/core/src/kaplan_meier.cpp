#include "tscp/kaplan_meier.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tscp {

KaplanMeierCurve::KaplanMeierCurve(std::vector<double> jump_times, std::vector<double> survival_values)
    : jump_times_(std::move(jump_times)), survival_values_(std::move(survival_values)) {
  if (jump_times_.size() != survival_values_.size()) {
    throw std::invalid_argument("jump_times and survival_values differ in length");
  }
}

double KaplanMeierCurve::survival(double t) const {
  const auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return 1.0;
  return survival_values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

double KaplanMeierCurve::survival_before(double t) const {
  const auto it = std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return 1.0;
  return survival_values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

KaplanMeierCurve fit_kaplan_meier(std::span<const double> time, const std::vector<bool>& event) {
  const auto n = time.size();
  if (n == 0 || event.size() != n) throw std::invalid_argument("fit_kaplan_meier: empty or mismatched input");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return time[a] < time[b]; });

  std::vector<double> jumps;
  std::vector<double> values;
  double s = 1.0;
  std::size_t at_risk = n;
  for (std::size_t k = 0; k < n;) {
    const double t = time[order[k]];
    std::size_t deaths = 0;
    std::size_t tied = 0;
    for (; k < n && time[order[k]] == t; ++k, ++tied) {
      if (event[order[k]]) ++deaths;
    }
    if (deaths > 0) {
      s *= static_cast<double>(at_risk - deaths) / static_cast<double>(at_risk);
      jumps.push_back(t);
      values.push_back(s);
    }
    at_risk -= tied;
  }
  return {std::move(jumps), std::move(values)};
}

KaplanMeierCurve censoring_survival(const SurvivalDataset& data, const IndexSet& rows) {
  if (rows.empty()) throw std::invalid_argument("censoring_survival: no rows");
  std::vector<double> t;
  std::vector<bool> censored;
  t.reserve(rows.size());
  censored.reserve(rows.size());
  for (auto i : rows) {
    t.push_back(data.time(i));
    censored.push_back(!data.event(i));
  }
  return fit_kaplan_meier(t, censored);
}

}  // namespace tscp
