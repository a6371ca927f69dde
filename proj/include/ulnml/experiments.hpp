#ifndef ULNML_EXPERIMENTS_HPP
#define ULNML_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ulnml/baselines.hpp"
#include "ulnml/core.hpp"
#include "ulnml/data.hpp"

namespace ulnml {

/// One experiment cell outcome. Serialized CSV schema (header fixed):
///   method,n,dim,seed,metric,wall_time_ms,extra_json
struct ExperimentResult {
  std::string method;
  int n = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  double metric = 0.0;
  double wall_time_ms = 0.0;
  std::string extra_json;
};

struct RidgeExperimentConfig {
  // data source: synthetic unless csv_path is set
  bool correlated = false;
  int informative = 5;
  int irrelevant = 45;
  double noise_sd = 1.0;
  std::string csv_path;
  std::string target_column;
  bool standardize = true;

  std::vector<int> n_values;
  int seeds = 10;
  std::vector<std::string> methods;  // subset of ridge_method_names()

  double test_fraction = 0.1;
  int kfold = 10;
  GridSpec grid{1e-4, 1.0, 20};
  Interval lambda_box{1e-6, 1e6};
  Interval sigma_bounds{1e-2, 1e2};
  std::vector<double> multistart{1e-2, 1.0, 1e2, 1e4};
  int max_iter = 200;
  double rel_tol = 1e-8;
  int threads = 0;  // 0 = auto
  bool record_timing = false;
};

struct GgmExperimentConfig {
  std::vector<int> m_values;
  std::vector<int> n_values;
  int seeds = 10;
  std::vector<std::string> methods;  // subset of ggm_method_names()

  int kfold = 10;
  GridSpec grid{1e-4, 1e4, 20};
  Interval lambda_box{1e-6, 1e10};
  double radius_factor = 10.0;  // R = radius_factor * max_i S_ii / n
  std::vector<double> multistart{1.0};  // scalar inits scaled by h0
  int max_iter = 200;
  double rel_tol = 1e-8;
  double ebic_gamma = 0.5;
  int threads = 0;
  bool record_timing = false;
};

const std::vector<std::string>& ridge_method_names();
const std::vector<std::string>& ggm_method_names();

/// Run the full (method x n x seed) grid. Cells are dispatched to a worker
/// pool and gathered in deterministic sorted order; identical configs and
/// seeds reproduce identical results regardless of thread count.
std::vector<ExperimentResult> run_ridge_experiments(const RidgeExperimentConfig& cfg);
std::vector<ExperimentResult> run_ggm_experiments(const GgmExperimentConfig& cfg);

/// Fixed-header CSV; wall_time_ms is written as 0 unless record_timing was
/// set, so default outputs are byte-identical across reruns.
void write_results_csv(const std::string& path, const std::vector<ExperimentResult>& results,
                       bool record_timing);

std::string results_csv_string(const std::vector<ExperimentResult>& results, bool record_timing);

/// Optional JSON side-car with per-(method, n, dim) metric summaries and
/// the generator/selection parameters of the run.
void write_json_summary(const std::string& path, const std::vector<ExperimentResult>& results,
                        const std::string& config_json);

double median(std::vector<double> values);

}  // namespace ulnml

#endif  // ULNML_EXPERIMENTS_HPP
