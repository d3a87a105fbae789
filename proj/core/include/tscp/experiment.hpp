#pragma once

#include "tscp/conformal.hpp"
#include "tscp/dataset.hpp"
#include "tscp/logistic.hpp"
#include "tscp/metrics.hpp"
#include "tscp/survival_model.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tscp {

enum class SurvivalModelKind { cox, weibull_aft };
enum class MethodKind { twosided, scp, both };

std::string to_string(SurvivalModelKind kind);
std::string to_string(MethodKind kind);
/// Throw ConfigError naming the field on unknown values.
SurvivalModelKind parse_model_kind(const std::string& s);
MethodKind parse_method_kind(const std::string& s);

struct ExperimentConfig {
  std::size_t n = 400;
  std::size_t n_test = 100;
  std::size_t replications = 100;
  double censoring_rate = 0.3;
  double alpha = 0.1;
  double alpha_split = 0.5;
  double train_fraction = 0.5;
  SurvivalModelKind model = SurvivalModelKind::weibull_aft;
  std::string classifier = "logistic";
  MethodKind method = MethodKind::twosided;
  std::uint64_t seed = 1;
  /// 0 = hardware concurrency.
  std::size_t threads = 0;
  /// run mode: number of random train/cal/test splits and their proportions.
  std::size_t splits = 100;
  std::array<double, 3> ratios{0.4, 0.4, 0.2};
  /// Covariate columns for the classifier; empty = same as the survival model.
  std::vector<std::size_t> classifier_columns;
};

/// Throws ConfigError naming the offending field.
void validate_simulation_config(const ExperimentConfig& config);
void validate_run_config(const ExperimentConfig& config);

/// Fits the configured survival model on `train`. A Cox fit that fails
/// numerically is retried once with ridge 1e-4.
std::shared_ptr<const FittedSurvivalModel> fit_survival_model(SurvivalModelKind kind, const SurvivalDataset& data,
                                                              const IndexSet& train);

/// Fits the classifier of P(event = 1 | x) on the training rows.
std::shared_ptr<const LogisticModel> fit_event_classifier(const SurvivalDataset& data, const IndexSet& train,
                                                          const std::vector<std::size_t>& columns = {});

/// Metrics of one method on one synthetic replication.
struct SyntheticMethodResult {
  ExperimentReport report;
  /// Only filled for the two-sided method.
  std::optional<ErrorComponents> components;
  std::size_t flagged_candidates = 0;  // SCP only
};

struct SimulationReplication {
  std::uint64_t seed = 0;
  std::optional<SyntheticMethodResult> twosided;
  std::optional<SyntheticMethodResult> scp;
  std::vector<std::string> warnings;
};

struct SimulationResult {
  ExperimentConfig config;
  double t0 = 0.0;
  std::uint64_t t0_seed = 0;
  std::vector<SimulationReplication> replications;
};

/// Runs one replication: generate, split, fit, calibrate, predict fresh test points, evaluate.
SimulationReplication simulate_replication(const ExperimentConfig& config, double t0, std::size_t index);

/// Resolves t0 from the censoring rate, then runs every replication (in parallel).
SimulationResult run_simulation(const ExperimentConfig& config);

struct PredictionRecord {
  std::size_t split = 0;
  std::size_t id = 0;  // zero-based row of the input data
  double lower = 0.0;
  double upper = 0.0;
  bool event_class = false;
};

struct RunMethodResult {
  GroupedBounds bounds;
  std::vector<PredictionRecord> predictions;
};

struct RunSplit {
  std::uint64_t seed = 0;
  std::optional<RunMethodResult> twosided;
  std::optional<RunMethodResult> scp;
  std::vector<std::string> warnings;
};

struct RunResult {
  ExperimentConfig config;
  std::string data_source;
  std::vector<std::string> covariate_names;
  std::size_t n_rows = 0;
  std::vector<RunSplit> splits;
};

RunSplit run_split(const ExperimentConfig& config, const SurvivalDataset& data, std::size_t index);
RunResult run_dataset(const ExperimentConfig& config, const SurvivalDataset& data);

/// Writes report.json and table.csv into `dir`.
void write_simulation_report(const SimulationResult& result, const std::filesystem::path& dir);
/// Writes report.json, table.csv and predictions.csv into `dir`.
void write_run_report(const RunResult& result, const std::filesystem::path& dir);

}  // namespace tscp
