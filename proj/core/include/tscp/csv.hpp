#pragma once

#include "tscp/dataset.hpp"
#include "tscp/synth.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tscp {

/// A CSV survival table: `time` (positive) and `event` (0/1) columns are
/// required; every other column not listed as ignored becomes a covariate.
struct CsvDataset {
  SurvivalDataset data;
  std::vector<std::string> covariate_names;
};

/// Columns skipped by default: identifiers and latent synthetic truth.
std::vector<std::string> default_ignored_columns();

/// Throws DataError with row/column diagnostics on malformed input.
CsvDataset read_survival_csv(std::istream& in, const std::vector<std::string>& ignored = default_ignored_columns());
CsvDataset read_survival_csv(const std::filesystem::path& path,
                             const std::vector<std::string>& ignored = default_ignored_columns());

/// Header `x1,x2,time,event,true_time,censor_time`.
void write_synthetic_csv(std::ostream& out, const SyntheticSample& sample);

/// Shortest round-trip decimal form; "inf" for +inf.
std::string format_number(double v);

}  // namespace tscp
