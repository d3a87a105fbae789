#include "tscp/csv.hpp"
#include "tscp/error.hpp"
#include "tscp/experiment.hpp"
#include "tscp/rng.hpp"
#include "tscp/synth.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum ExitCode : int { kOk = 0, kConfig = 2, kData = 3, kNumerical = 4 };

std::array<double, 3> parse_ratios(const std::string& text) {
  std::array<double, 3> out{};
  std::stringstream ss(text);
  std::string field;
  std::size_t k = 0;
  while (std::getline(ss, field, ',')) {
    if (k == 3) throw tscp::ConfigError("ratios: expected three comma-separated values");
    try {
      std::size_t used = 0;
      out[k] = std::stod(field, &used);
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw tscp::ConfigError("ratios: '" + field + "' is not a number");
    }
    ++k;
  }
  if (k != 3) throw tscp::ConfigError("ratios: expected three comma-separated values");
  return out;
}

void add_common(CLI::App* cmd, tscp::ExperimentConfig& c, std::string& model, std::string& method) {
  cmd->add_option("--alpha", c.alpha, "Target miscoverage level")->capture_default_str();
  cmd->add_option("--alpha-split", c.alpha_split, "Share of alpha spent on the classifier")->capture_default_str();
  cmd->add_option("--model", model, "Survival model: cox | weibull_aft")->capture_default_str();
  cmd->add_option("--method", method, "twosided | scp | both")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Root seed")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
  cmd->add_option("--classifier-columns", c.classifier_columns, "Covariate columns used by the classifier");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Two-sided conformal survival prediction: simulation and dataset runner"};
  app.require_subcommand(1);

  tscp::ExperimentConfig sim;
  std::string sim_model = "weibull_aft", sim_method = "twosided", sim_out;
  auto* simulate = app.add_subcommand("simulate", "Run the synthetic study");
  simulate->add_option("--n", sim.n, "Training plus calibration size")->capture_default_str();
  simulate->add_option("--n-test", sim.n_test, "Fresh test points per replication")->capture_default_str();
  simulate->add_option("--censoring-rate", sim.censoring_rate, "Target censoring rate")->capture_default_str();
  simulate->add_option("--train-fraction", sim.train_fraction, "Training share of n")->capture_default_str();
  simulate->add_option("--reps", sim.replications, "Replications")->capture_default_str();
  simulate->add_option("--out", sim_out, "Output directory")->required();
  add_common(simulate, sim, sim_model, sim_method);

  tscp::ExperimentConfig run;
  std::string run_model = "weibull_aft", run_method = "twosided", run_out, run_data, run_ratios = "0.4,0.4,0.2";
  auto* runcmd = app.add_subcommand("run", "Run repeated splits on a CSV dataset");
  runcmd->add_option("--data", run_data, "CSV with time, event and numeric covariates")->required();
  runcmd->add_option("--splits", run.splits, "Random splits")->capture_default_str();
  runcmd->add_option("--ratios", run_ratios, "train,calibration,test proportions")->capture_default_str();
  runcmd->add_option("--out", run_out, "Output directory")->required();
  add_common(runcmd, run, run_model, run_method);

  std::size_t gen_n = 400;
  double gen_rate = 0.3;
  double gen_t0 = 0.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write a synthetic sample as CSV");
  gen->add_option("--n", gen_n, "Rows")->capture_default_str();
  auto* rate_opt = gen->add_option("--censoring-rate", gen_rate, "Target censoring rate")->capture_default_str();
  gen->add_option("--t0", gen_t0, "Censoring upper limit (overrides --censoring-rate)")->excludes(rate_opt);
  gen->add_option("--seed", gen_seed, "Seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (simulate->parsed()) {
    sim.model = tscp::parse_model_kind(sim_model);
    sim.method = tscp::parse_method_kind(sim_method);
    const auto result = tscp::run_simulation(sim);
    tscp::write_simulation_report(result, sim_out);
    std::cout << "t0 = " << tscp::format_number(result.t0) << ", " << result.replications.size()
              << " replications written to " << sim_out << "\n";
  } else if (runcmd->parsed()) {
    run.model = tscp::parse_model_kind(run_model);
    run.method = tscp::parse_method_kind(run_method);
    run.ratios = parse_ratios(run_ratios);
    tscp::validate_run_config(run);
    const auto csv = tscp::read_survival_csv(std::filesystem::path(run_data));
    auto result = tscp::run_dataset(run, csv.data);
    result.data_source = std::filesystem::path(run_data).filename().string();
    result.covariate_names = csv.covariate_names;
    tscp::write_run_report(result, run_out);
    std::cout << result.splits.size() << " splits over " << result.n_rows << " rows written to " << run_out << "\n";
  } else if (gen->parsed()) {
    if (gen_n < 1) throw tscp::ConfigError("n must be >= 1");
    double t0 = gen_t0;
    if (gen->count("--t0") == 0) {
      if (!(gen_rate > 0.0 && gen_rate < 1.0)) throw tscp::ConfigError("censoring_rate must lie in (0, 1)");
      t0 = tscp::calibrate_t0(gen_rate, tscp::derive_seed(gen_seed, 0));
    } else if (!(t0 > 1.0)) {
      throw tscp::ConfigError("t0 must exceed 1");
    }
    const auto sample = tscp::generate(gen_n, t0, gen_seed);
    std::ofstream out(gen_out, std::ios::binary);
    if (!out) throw tscp::DataError("cannot write '" + gen_out + "'");
    tscp::write_synthetic_csv(out, sample);
    std::cout << gen_n << " rows (t0 = " << tscp::format_number(t0) << ") written to " << gen_out << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const tscp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const tscp::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const tscp::DegenerateCalibration& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const tscp::ConvergenceError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
