#pragma once

#include "tscp/dataset.hpp"

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <vector>

namespace tscp::detail {

/// Training design with each column centred and scaled to unit sd.
/// Constant columns keep scale 1 (they become all-zero columns).
struct StandardizedDesign {
  Eigen::MatrixXd z;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
};

inline StandardizedDesign standardize(const SurvivalDataset& data, const IndexSet& rows,
                                      std::span<const std::size_t> columns) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(columns.size());
  StandardizedDesign out{Eigen::MatrixXd(n, d), Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)};
  const auto& x = data.covariates();
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      out.z(r, c) = x(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)]),
                      static_cast<Eigen::Index>(columns[static_cast<std::size_t>(c)]));
    }
  }
  for (Eigen::Index c = 0; c < d; ++c) {
    const double m = out.z.col(c).mean();
    const double var = (out.z.col(c).array() - m).square().sum() / static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
    const double sd = std::sqrt(var);
    out.mean(c) = m;
    out.scale(c) = sd > 1e-12 * (1.0 + std::abs(m)) ? sd : 1.0;
    out.z.col(c) = (out.z.col(c).array() - m) / out.scale(c);
  }
  return out;
}

inline std::vector<std::size_t> all_columns(std::size_t d) {
  std::vector<std::size_t> cols(d);
  for (std::size_t j = 0; j < d; ++j) cols[j] = j;
  return cols;
}

}  // namespace tscp::detail
