#include "tscp/experiment.hpp"

#include "tscp/cox.hpp"
#include "tscp/csv.hpp"
#include "tscp/error.hpp"
#include "tscp/rng.hpp"
#include "tscp/scp.hpp"
#include "tscp/synth.hpp"
#include "tscp/weibull_aft.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

namespace tscp {
namespace {

using nlohmann::ordered_json;

// Fixed stream for the censoring-parameter search.
constexpr std::uint64_t kT0Seed = 0x74302d6d63ULL;
constexpr double kCoxFallbackRidge = 1e-4;

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const auto i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

void require_rate(double v, const char* field) {
  if (!(v > 0.0 && v < 1.0)) throw ConfigError(std::string(field) + " must lie in (0, 1)");
}

bool runs_twosided(MethodKind m) { return m == MethodKind::twosided || m == MethodKind::both; }
bool runs_scp(MethodKind m) { return m == MethodKind::scp || m == MethodKind::both; }

Prediction scp_as_prediction(const Interval& interval) {
  if (interval.finite_upper()) return Prediction::two_sided(interval);
  return Prediction::lower_only(interval.lower());
}

std::vector<bool> classes_of(const std::vector<Prediction>& predictions) {
  std::vector<bool> out;
  out.reserve(predictions.size());
  for (const auto& p : predictions) out.push_back(p.event_class());
  return out;
}

void attach_bounds(ExperimentReport& report, const std::vector<Prediction>& predictions,
                   const SurvivalDataset& observed) {
  const auto bounds = evaluate_censored(predictions, observed.time(), observed.event(), classes_of(predictions));
  report.cov_lo = bounds.lo;
  report.cov_up = bounds.up;
}

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json stat_json(const SummaryStat& s) {
  return ordered_json{{"mean", opt(s.mean)}, {"sd", opt(s.sd)}, {"count", s.count}};
}

std::string method_label(const std::string& method, SurvivalModelKind model) {
  if (method == "twosided") return "twosided(logistic," + to_string(model) + ")";
  return "scp(" + to_string(model) + ")";
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["n"] = c.n;
  j["n_test"] = c.n_test;
  j["replications"] = c.replications;
  j["censoring_rate"] = c.censoring_rate;
  j["alpha"] = c.alpha;
  j["alpha_split"] = c.alpha_split;
  j["train_fraction"] = c.train_fraction;
  j["model"] = to_string(c.model);
  j["classifier"] = c.classifier;
  j["method"] = to_string(c.method);
  j["seed"] = c.seed;
  j["splits"] = c.splits;
  j["ratios"] = c.ratios;
  j["classifier_columns"] = c.classifier_columns;
  return j;
}

ordered_json conventions_json() {
  return ordered_json{
      {"event_score", "estimated P(event = 1 | x); subject gets a two-sided set when score >= q_delta"},
      {"p_value", "(1 + #{calibration scores >= test score}) / (1 + m)"},
      {"quantile_rank", "k = ceil((1 - alpha) * (m + 1)); +inf when k > m"},
      {"two_sided_score", "|1/2 - F(t | x)|"},
      {"lower_bound_score", "1/2 - F(t | x)"},
      {"groups", "two-sided group = finite upper bound"},
      {"scp_event_class", "finite upper bound"},
      {"scp_grid", "512 log-spaced points from min(time)/2 to max(time); end points open the interval"},
      {"rng", "splitmix64 counter-based streams; normals by Box-Muller; seeds derived per replication"},
  };
}

// Column order shared by the simulate table.
const std::vector<std::string>& synthetic_metric_names() {
  static const std::vector<std::string> names{
      "two_sided_proportion", "coverage_one_sided", "coverage_two_sided", "avg_lpb_one_sided",
      "avg_length_two_sided", "coverage_overall",   "cov_lo",             "cov_up"};
  return names;
}

std::optional<double> synthetic_metric(const ExperimentReport& r, std::size_t k) {
  switch (k) {
    case 0: return r.two_sided_proportion;
    case 1: return r.coverage_one_sided;
    case 2: return r.coverage_two_sided;
    case 3: return r.avg_lpb_one_sided;
    case 4: return r.avg_length_two_sided;
    case 5: return r.coverage_overall;
    case 6: return r.cov_lo;
    case 7: return r.cov_up;
    default: return std::nullopt;
  }
}

const std::vector<std::string>& run_metric_names() {
  static const std::vector<std::string> names{"two_sided_proportion", "cov_lo",           "cov_up",
                                              "one_sided_cov_lo",     "one_sided_cov_up", "two_sided_cov_lo",
                                              "two_sided_cov_up"};
  return names;
}

std::optional<double> run_metric(const GroupedBounds& b, std::size_t k) {
  switch (k) {
    case 0: return b.two_sided_proportion;
    case 1: return b.overall.lo;
    case 2: return b.overall.up;
    case 3: return b.one_sided ? std::optional(b.one_sided->lo) : std::nullopt;
    case 4: return b.one_sided ? std::optional(b.one_sided->up) : std::nullopt;
    case 5: return b.two_sided ? std::optional(b.two_sided->lo) : std::nullopt;
    case 6: return b.two_sided ? std::optional(b.two_sided->up) : std::nullopt;
    default: return std::nullopt;
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

std::string csv_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string to_string(SurvivalModelKind kind) { return kind == SurvivalModelKind::cox ? "cox" : "weibull_aft"; }

std::string to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::twosided: return "twosided";
    case MethodKind::scp: return "scp";
    case MethodKind::both: return "both";
  }
  return "both";
}

SurvivalModelKind parse_model_kind(const std::string& s) {
  if (s == "cox") return SurvivalModelKind::cox;
  if (s == "weibull_aft" || s == "weibull") return SurvivalModelKind::weibull_aft;
  throw ConfigError("model: expected 'cox' or 'weibull_aft', got '" + s + "'");
}

MethodKind parse_method_kind(const std::string& s) {
  if (s == "twosided") return MethodKind::twosided;
  if (s == "scp") return MethodKind::scp;
  if (s == "both") return MethodKind::both;
  throw ConfigError("method: expected 'twosided', 'scp' or 'both', got '" + s + "'");
}

void validate_simulation_config(const ExperimentConfig& c) {
  if (c.n < 4) throw ConfigError("n must be >= 4");
  if (c.n_test < 1) throw ConfigError("n_test must be >= 1");
  if (c.replications < 1) throw ConfigError("replications must be >= 1");
  require_rate(c.censoring_rate, "censoring_rate");
  require_rate(c.alpha, "alpha");
  require_rate(c.alpha_split, "alpha_split");
  require_rate(c.train_fraction, "train_fraction");
  if (c.classifier != "logistic") throw ConfigError("classifier: only 'logistic' is available");
  for (auto col : c.classifier_columns) {
    if (col >= 2) throw ConfigError("classifier_columns: synthetic data has 2 covariates");
  }
}

void validate_run_config(const ExperimentConfig& c) {
  if (c.splits < 1) throw ConfigError("splits must be >= 1");
  require_rate(c.alpha, "alpha");
  require_rate(c.alpha_split, "alpha_split");
  if (c.classifier != "logistic") throw ConfigError("classifier: only 'logistic' is available");
  for (double r : c.ratios) {
    if (!(r > 0.0)) throw ConfigError("ratios: every proportion must be positive");
  }
}

std::shared_ptr<const FittedSurvivalModel> fit_survival_model(SurvivalModelKind kind, const SurvivalDataset& data,
                                                              const IndexSet& train) {
  if (kind == SurvivalModelKind::weibull_aft) return std::make_shared<WeibullAftModel>(fit_weibull_aft(data, train));
  try {
    return std::make_shared<CoxModel>(fit_cox(data, train));
  } catch (const ConvergenceError&) {
    CoxOptions options;
    options.ridge = kCoxFallbackRidge;
    return std::make_shared<CoxModel>(fit_cox(data, train, options));
  }
}

std::shared_ptr<const LogisticModel> fit_event_classifier(const SurvivalDataset& data, const IndexSet& train,
                                                          const std::vector<std::size_t>& columns) {
  LogisticOptions options;
  options.columns = columns;
  return std::make_shared<LogisticModel>(fit_logistic(data, train, data.event(), options));
}

SimulationReplication simulate_replication(const ExperimentConfig& config, double t0, std::size_t index) {
  SimulationReplication rep;
  rep.seed = derive_seed(config.seed, index);
  const auto sample = generate(config.n, t0, derive_seed(rep.seed, 1));
  const auto test = generate(config.n_test, t0, derive_seed(rep.seed, 2));
  const auto& data = sample.dataset;
  const auto split = split_dataset(data, config.train_fraction, derive_seed(rep.seed, 3));
  const auto model = fit_survival_model(config.model, data, split.train);

  const auto& test_data = test.dataset;
  if (runs_twosided(config.method)) {
    const auto classifier = fit_event_classifier(data, split.train, config.classifier_columns);
    if (classifier->separated) rep.warnings.emplace_back("classifier: separation detected, ridge fallback used");
    CalibrationOptions options{config.alpha, config.alpha_split};
    const auto predictor = calibrate(data, split, model, classifier, options);
    rep.warnings.insert(rep.warnings.end(), predictor.warnings.begin(), predictor.warnings.end());

    std::vector<Prediction> predictions;
    std::vector<Interval> two_sided;
    std::vector<double> lower;
    for (std::size_t i = 0; i < test_data.size(); ++i) {
      const auto x = test_data.row(i);
      predictions.push_back(predictor.predict(x));
      two_sided.push_back(predictor.two_sided_interval(x));
      lower.push_back(predictor.naive_lpb(x));
    }
    SyntheticMethodResult result;
    result.report = evaluate_synthetic(predictions, test.true_time);
    attach_bounds(result.report, predictions, test_data);
    result.components = evaluate_error_components(predictions, two_sided, lower, test.true_time, test_data.event());
    rep.twosided = std::move(result);
  }
  if (runs_scp(config.method)) {
    const WeightedCalibration calibration(data, split, *model, config.alpha);
    const auto grid = make_time_grid(data);
    std::vector<Prediction> predictions;
    SyntheticMethodResult result;
    for (std::size_t i = 0; i < test_data.size(); ++i) {
      const auto p = scp_predict(calibration, *model, test_data.row(i), grid);
      result.flagged_candidates += p.infinite_weight_candidates;
      predictions.push_back(scp_as_prediction(p.interval));
    }
    result.report = evaluate_synthetic(predictions, test.true_time);
    attach_bounds(result.report, predictions, test_data);
    rep.scp = std::move(result);
  }
  return rep;
}

SimulationResult run_simulation(const ExperimentConfig& config) {
  validate_simulation_config(config);
  SimulationResult result;
  result.config = config;
  result.t0_seed = kT0Seed;
  result.t0 = calibrate_t0(config.censoring_rate, kT0Seed);
  result.replications.resize(config.replications);
  parallel_for(config.replications, config.threads,
               [&](std::size_t i) { result.replications[i] = simulate_replication(config, result.t0, i); });
  return result;
}

RunSplit run_split(const ExperimentConfig& config, const SurvivalDataset& data, std::size_t index) {
  RunSplit out;
  out.seed = derive_seed(config.seed, index);
  const auto n = data.size();
  const double total = config.ratios[0] + config.ratios[1] + config.ratios[2];
  auto n_test = static_cast<std::size_t>(std::llround(config.ratios[2] / total * static_cast<double>(n)));
  n_test = std::clamp<std::size_t>(n_test, 1, n);
  if (n - n_test < 4) throw ConfigError("ratios: too few rows left for training and calibration");

  const auto perm = random_permutation(n, derive_seed(out.seed, 1));
  IndexSet rest(perm.begin(), perm.end() - static_cast<std::ptrdiff_t>(n_test));
  IndexSet test_rows(perm.end() - static_cast<std::ptrdiff_t>(n_test), perm.end());
  std::sort(rest.begin(), rest.end());
  std::sort(test_rows.begin(), test_rows.end());
  const auto fit_data = data.subset(rest);
  const auto test_data = data.subset(test_rows);

  const double train_fraction = config.ratios[0] / (config.ratios[0] + config.ratios[1]);
  const auto split = split_dataset(fit_data, train_fraction, derive_seed(out.seed, 2));
  const auto model = fit_survival_model(config.model, fit_data, split.train);

  auto finish = [&](std::vector<Prediction>& predictions) {
    RunMethodResult r;
    r.bounds = evaluate_censored_groups(predictions, test_data.time(), test_data.event(), classes_of(predictions));
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      r.predictions.push_back(
          {index, test_rows[i], predictions[i].lower(), predictions[i].upper(), predictions[i].event_class()});
    }
    return r;
  };

  if (runs_twosided(config.method)) {
    const auto classifier = fit_event_classifier(fit_data, split.train, config.classifier_columns);
    if (classifier->separated) out.warnings.emplace_back("classifier: separation detected, ridge fallback used");
    const auto predictor = calibrate(fit_data, split, model, classifier, {config.alpha, config.alpha_split});
    out.warnings.insert(out.warnings.end(), predictor.warnings.begin(), predictor.warnings.end());
    std::vector<Prediction> predictions;
    for (std::size_t i = 0; i < test_data.size(); ++i) predictions.push_back(predictor.predict(test_data.row(i)));
    out.twosided = finish(predictions);
  }
  if (runs_scp(config.method)) {
    const WeightedCalibration calibration(fit_data, split, *model, config.alpha);
    const auto grid = make_time_grid(fit_data);
    std::vector<Prediction> predictions;
    for (std::size_t i = 0; i < test_data.size(); ++i) {
      predictions.push_back(scp_as_prediction(scp_predict(calibration, *model, test_data.row(i), grid).interval));
    }
    out.scp = finish(predictions);
  }
  return out;
}

RunResult run_dataset(const ExperimentConfig& config, const SurvivalDataset& data) {
  validate_run_config(config);
  for (auto col : config.classifier_columns) {
    if (col >= data.dimension()) throw ConfigError("classifier_columns: index out of range");
  }
  RunResult result;
  result.config = config;
  result.n_rows = data.size();
  result.splits.resize(config.splits);
  parallel_for(config.splits, config.threads,
               [&](std::size_t i) { result.splits[i] = run_split(config, data, i); });
  return result;
}

void write_simulation_report(const SimulationResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto& metrics = synthetic_metric_names();
  ordered_json report;
  report["mode"] = "simulate";
  report["config"] = config_json(result.config);
  report["t0"] = result.t0;
  report["t0_seed"] = result.t0_seed;
  report["conventions"] = conventions_json();

  std::string table = "method";
  for (const auto& m : metrics) table += "," + m + "_mean," + m + "_sd";
  table += "\n";

  ordered_json methods = ordered_json::object();
  for (const std::string method : {"twosided", "scp"}) {
    const auto pick = [&](const SimulationReplication& r) -> const std::optional<SyntheticMethodResult>& {
      return method == "twosided" ? r.twosided : r.scp;
    };
    if (result.replications.empty() || !pick(result.replications.front())) continue;
    ordered_json block;
    block["label"] = method_label(method, result.config.model);
    ordered_json summary;
    std::string row = method_label(method, result.config.model);
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      std::vector<std::optional<double>> values;
      for (const auto& r : result.replications) values.push_back(synthetic_metric(pick(r)->report, k));
      const auto s = summarize(values);
      summary[metrics[k]] = stat_json(s);
      row += "," + csv_cell(s.mean) + "," + csv_cell(s.sd);
    }
    table += row + "\n";
    block["summary"] = summary;
    if (method == "twosided") {
      ErrorComponents pooled;
      for (const auto& r : result.replications) pooled += *pick(r)->components;
      block["pooled_errors"] = ordered_json{{"n", pooled.n},
                                            {"miscoverage", pooled.miscoverage()},
                                            {"type1", opt(pooled.type1())},
                                            {"two_sided_miss", opt(pooled.two_sided_miss())},
                                            {"lpb_miss", pooled.lpb_miss()},
                                            {"decomposition_bound", pooled.decomposition_bound()}};
    }
    ordered_json reps = ordered_json::array();
    for (const auto& r : result.replications) {
      const auto& m = *pick(r);
      ordered_json entry;
      entry["seed"] = r.seed;
      entry["n_two_sided"] = m.report.n_two_sided;
      for (std::size_t k = 0; k < metrics.size(); ++k) entry[metrics[k]] = opt(synthetic_metric(m.report, k));
      if (m.components) {
        const auto& c = *m.components;
        entry["errors"] = ordered_json{{"n_censored", c.n_censored},     {"n_censored_flagged", c.n_censored_flagged},
                                       {"n_event", c.n_event},           {"n_event_missed", c.n_event_missed},
                                       {"n_lpb_missed", c.n_lpb_missed}, {"n_missed", c.n_missed}};
      } else {
        entry["infinite_weight_candidates"] = m.flagged_candidates;
      }
      reps.push_back(entry);
    }
    block["replications"] = reps;
    methods[method] = block;
  }
  report["methods"] = methods;
  ordered_json warnings = ordered_json::array();
  for (std::size_t i = 0; i < result.replications.size(); ++i) {
    for (const auto& w : result.replications[i].warnings) warnings.push_back({{"replication", i}, {"message", w}});
  }
  report["warnings"] = warnings;

  write_text(dir / "report.json", report.dump(2) + "\n");
  write_text(dir / "table.csv", table);
}

void write_run_report(const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto& metrics = run_metric_names();
  ordered_json report;
  report["mode"] = "run";
  report["config"] = config_json(result.config);
  report["data"] = ordered_json{{"rows", result.n_rows}, {"covariates", result.covariate_names}};
  if (!result.data_source.empty()) report["data"]["source"] = result.data_source;
  report["conventions"] = conventions_json();

  std::string table = "method";
  for (const auto& m : metrics) table += "," + m + "_mean," + m + "_sd";
  table += "\n";
  std::string predictions = "method,split,id,lower,upper,event_class\n";

  ordered_json methods = ordered_json::object();
  for (const std::string method : {"twosided", "scp"}) {
    const auto pick = [&](const RunSplit& s) -> const std::optional<RunMethodResult>& {
      return method == "twosided" ? s.twosided : s.scp;
    };
    if (result.splits.empty() || !pick(result.splits.front())) continue;
    const auto label = method_label(method, result.config.model);
    ordered_json block;
    block["label"] = label;
    ordered_json summary;
    std::string row = label;
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      std::vector<std::optional<double>> values;
      for (const auto& s : result.splits) values.push_back(run_metric(pick(s)->bounds, k));
      const auto st = summarize(values);
      summary[metrics[k]] = stat_json(st);
      row += "," + csv_cell(st.mean) + "," + csv_cell(st.sd);
    }
    table += row + "\n";
    block["summary"] = summary;
    ordered_json splits = ordered_json::array();
    for (const auto& s : result.splits) {
      const auto& m = *pick(s);
      ordered_json entry;
      entry["seed"] = s.seed;
      for (std::size_t k = 0; k < metrics.size(); ++k) entry[metrics[k]] = opt(run_metric(m.bounds, k));
      splits.push_back(entry);
      for (const auto& p : m.predictions) {
        predictions += method + "," + std::to_string(p.split) + "," + std::to_string(p.id) + "," +
                       format_number(p.lower) + "," + format_number(p.upper) + "," + (p.event_class ? "1" : "0") +
                       "\n";
      }
    }
    block["splits"] = splits;
    methods[method] = block;
  }
  report["methods"] = methods;
  ordered_json warnings = ordered_json::array();
  for (std::size_t i = 0; i < result.splits.size(); ++i) {
    for (const auto& w : result.splits[i].warnings) warnings.push_back({{"split", i}, {"message", w}});
  }
  report["warnings"] = warnings;

  write_text(dir / "report.json", report.dump(2) + "\n");
  write_text(dir / "table.csv", table);
  write_text(dir / "predictions.csv", predictions);
}

}  // namespace tscp
