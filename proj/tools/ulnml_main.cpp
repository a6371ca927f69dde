#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "ulnml/baselines.hpp"
#include "ulnml/experiments.hpp"
#include "ulnml/oracle.hpp"

namespace {

using ulnml::ExperimentResult;
using json = nlohmann::json;

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

int run_boundcheck(const std::string& domain, double B, double lambda_lo, double lambda_hi,
                   int grid_count, const std::vector<double>& explicit_lambdas) {
  std::vector<double> lambdas;
  if (!explicit_lambdas.empty()) {
    lambdas = explicit_lambdas;
  } else {
    lambdas = ulnml::grid_points({lambda_lo, lambda_hi, grid_count});
  }
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      std::cerr << "boundcheck: lambda must be positive, got " << l << "\n";
      return 2;
    }
  }

  std::vector<ulnml::Scalar1DModel> models;
  std::vector<std::string> names;
  if (domain == "unbounded" || domain == "both") {
    models.push_back(ulnml::Scalar1DModel::unbounded());
    names.push_back("unbounded");
  }
  if (domain == "bounded" || domain == "both") {
    models.push_back(ulnml::Scalar1DModel::with_domain(B));
    names.push_back("bounded");
  }
  if (models.empty()) {
    std::cerr << "boundcheck: --domain must be one of unbounded, bounded, both\n";
    return 2;
  }

  bool all_pass = true;
  const double lambda_star = *std::min_element(lambdas.begin(), lambdas.end());
  for (std::size_t k = 0; k < models.size(); ++k) {
    const auto& model = models[k];
    const auto report = ulnml::gap_check(model, lambdas);
    std::printf("# domain=%s gap_bound=%.6g neighbor_halfwidth=%.6g\n", names[k].c_str(),
                report.bound, report.neighbor_halfwidth);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double lam = lambdas[i];
      const double z = ulnml::z_quadrature(model, lam);
      const double zbar = std::exp(ulnml::model_log_normalizer(lam));
      const double lower = ulnml::z_lower_bound(
          model, lam, lambda_star,
          model.bounded ? report.neighbor_halfwidth
                        : std::numeric_limits<double>::infinity());
      const bool upper_ok = zbar >= z * (1.0 - 1e-8);
      const bool lower_ok = z >= lower * (1.0 - 1e-8);
      const bool gap_ok = report.gaps[i] <= report.bound + 1e-8;
      const bool tight_ok =
          !model.bounded ? std::abs(report.gaps[i]) <= 1e-6 * std::max(1.0, std::abs(std::log(z)))
                         : true;
      const bool ok = upper_ok && lower_ok && gap_ok && tight_ok;
      all_pass = all_pass && ok;
      std::printf("domain=%s lambda=%.6g Z=%.9g Zbar=%.9g lower=%.9g gap=%.3e %s\n",
                  names[k].c_str(), lam, z, zbar, lower, report.gaps[i],
                  ok ? "PASS" : "FAIL");
    }
  }
  std::printf("%s\n", all_pass ? "ALL PASS" : "VIOLATIONS FOUND");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalty selection by analytic code-length bound minimization"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value option file ([section] per subcommand)");

  // ---- ridge ----
  auto* ridge = app.add_subcommand("ridge", "Regression experiments: alternating-minimization "
                                            "penalty selection vs grid-search baselines");
  std::string synthetic = "uncorrelated";
  std::string csv_path, target_column, out_path, summary_path;
  std::vector<int> n_values;
  int seeds = 10;
  std::vector<std::string> methods{"mdlrs-full", "mdlrs-diag", "cv-ridge", "bic-ridge"};
  int informative = 5, irrelevant = 45, kfold = 10, grid_count = 20, max_iter = 200;
  double noise_sd = 1.0, test_fraction = 0.1;
  double grid_lo = 1e-4, grid_hi = 1.0, box_lo = 1e-6, box_hi = 1e6;
  double sigma_rel_lo = 1.0 / 64.0, sigma_rel_hi = 64.0;
  double rel_tol = 1e-8;
  std::vector<double> multistart{1e-2, 1.0, 1e2, 1e4};
  int threads = 0;
  bool timing = false, no_standardize = false;

  ridge->add_option("--synthetic", synthetic, "Synthetic design: uncorrelated or correlated")
      ->check(CLI::IsMember({"uncorrelated", "correlated"}));
  ridge->add_option("--csv", csv_path, "Load data from a csv file instead of generating");
  ridge->add_option("--target", target_column, "Target column name for --csv");
  ridge->add_option("--n", n_values, "Sample sizes, comma separated")->delimiter(',');
  ridge->add_option("--seeds", seeds, "Number of seeds (0..seeds-1)");
  ridge->add_option("--methods", methods,
                    "Methods: " + join(ulnml::ridge_method_names(), ","))
      ->delimiter(',');
  ridge->add_option("--out", out_path, "Output csv path")->required();
  ridge->add_option("--json-summary", summary_path, "Optional json summary path");
  ridge->add_option("--informative", informative, "Informative feature count");
  ridge->add_option("--irrelevant", irrelevant, "Irrelevant feature count");
  ridge->add_option("--noise-sd", noise_sd, "Noise standard deviation");
  ridge->add_flag("--no-standardize", no_standardize, "Skip feature standardization");
  ridge->add_option("--test-fraction", test_fraction, "Held-out fraction per trial");
  ridge->add_option("--kfold", kfold, "Cross-validation folds");
  ridge->add_option("--grid-lo", grid_lo, "Baseline grid lower end");
  ridge->add_option("--grid-hi", grid_hi, "Baseline grid upper end");
  ridge->add_option("--grid-count", grid_count, "Baseline grid size");
  ridge->add_option("--box-lo", box_lo, "Weight box lower corner");
  ridge->add_option("--box-hi", box_hi, "Weight box upper corner");
  ridge->add_option("--sigma-rel-lo", sigma_rel_lo, "Variance clamp: lower multiple of var(y)");
  ridge->add_option("--sigma-rel-hi", sigma_rel_hi, "Variance clamp: upper multiple of var(y)");
  ridge->add_option("--multistart", multistart, "Scalar weight inits, comma separated")
      ->delimiter(',');
  ridge->add_option("--max-iter", max_iter, "Outer iteration cap");
  ridge->add_option("--rel-tol", rel_tol, "Relative objective-decrease stop threshold");
  ridge->add_option("--threads,-j", threads, "Worker threads (0 = auto)")
      ->envname("ULNML_THREADS");
  ridge->add_flag("--timing", timing, "Record wall times in the csv (breaks byte determinism)");

  // ---- ggm ----
  auto* ggm = app.add_subcommand("ggm", "Double-ring conditional-dependence experiments");
  std::vector<int> m_values{10, 20};
  std::vector<int> ggm_n_values;
  int ggm_seeds = 10, ggm_kfold = 10, ggm_grid_count = 20, ggm_max_iter = 200;
  std::vector<std::string> ggm_methods{"mdlrs", "cv-grid", "aic-grid", "bic-grid"};
  std::string ggm_out, ggm_summary;
  double ggm_grid_lo = 1e-4, ggm_grid_hi = 1e4, ggm_box_lo = 1e-6, ggm_box_hi = 1e10;
  double radius_factor = 10.0, ggm_rel_tol = 1e-8, ebic_gamma = 0.5;
  int ggm_threads = 0;
  bool ggm_timing = false;

  ggm->add_option("--m", m_values, "Variable counts, comma separated")->delimiter(',');
  ggm->add_option("--n", ggm_n_values, "Sample sizes, comma separated")->delimiter(',');
  ggm->add_option("--seeds", ggm_seeds, "Number of seeds (0..seeds-1)");
  ggm->add_option("--methods", ggm_methods, "Methods: " + join(ulnml::ggm_method_names(), ","))
      ->delimiter(',');
  ggm->add_option("--out", ggm_out, "Output csv path")->required();
  ggm->add_option("--json-summary", ggm_summary, "Optional json summary path");
  ggm->add_option("--kfold", ggm_kfold, "Cross-validation folds");
  ggm->add_option("--grid-lo", ggm_grid_lo, "Baseline grid lower end");
  ggm->add_option("--grid-hi", ggm_grid_hi, "Baseline grid upper end");
  ggm->add_option("--grid-count", ggm_grid_count, "Baseline grid size");
  ggm->add_option("--box-lo", ggm_box_lo, "Weight box lower corner");
  ggm->add_option("--box-hi", ggm_box_hi, "Weight box upper corner");
  ggm->add_option("--radius-factor", radius_factor, "R = factor * max_i S_ii / n");
  ggm->add_option("--max-iter", ggm_max_iter, "Outer iteration cap");
  ggm->add_option("--rel-tol", ggm_rel_tol, "Relative objective-decrease stop threshold");
  ggm->add_option("--ebic-gamma", ebic_gamma, "Extended BIC gamma");
  ggm->add_option("--threads,-j", ggm_threads, "Worker threads (0 = auto)")
      ->envname("ULNML_THREADS");
  ggm->add_flag("--timing", ggm_timing, "Record wall times in the csv (breaks byte determinism)");

  // ---- boundcheck ----
  auto* bc = app.add_subcommand("boundcheck",
                                "Validate the analytic normalizer bounds against quadrature");
  std::string domain = "both";
  double B = 1.0, bc_lo = 1e-2, bc_hi = 1e2;
  int bc_count = 20;
  std::vector<double> bc_lambdas;
  bc->add_option("--domain", domain, "unbounded, bounded, or both")
      ->check(CLI::IsMember({"unbounded", "bounded", "both"}));
  bc->add_option("--B", B, "Parameter-domain half-width for the bounded model");
  bc->add_option("--lambda-lo", bc_lo, "Weight grid lower end");
  bc->add_option("--lambda-hi", bc_hi, "Weight grid upper end");
  bc->add_option("--grid-count", bc_count, "Weight grid size");
  bc->add_option("--lambda", bc_lambdas, "Explicit weights, comma separated (overrides the grid)")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (ridge->parsed()) {
      ulnml::RidgeExperimentConfig cfg;
      cfg.correlated = synthetic == "correlated";
      cfg.informative = informative;
      cfg.irrelevant = irrelevant;
      cfg.noise_sd = noise_sd;
      cfg.csv_path = csv_path;
      cfg.target_column = target_column;
      cfg.standardize = !no_standardize;
      cfg.n_values = n_values;
      cfg.seeds = seeds;
      cfg.methods = methods;
      cfg.test_fraction = test_fraction;
      cfg.kfold = kfold;
      cfg.grid = {grid_lo, grid_hi, grid_count};
      cfg.lambda_box = {box_lo, box_hi};
      cfg.sigma_bounds = {sigma_rel_lo, sigma_rel_hi};
      cfg.multistart = multistart;
      cfg.max_iter = max_iter;
      cfg.rel_tol = rel_tol;
      cfg.threads = threads;
      cfg.record_timing = timing;
      if (!csv_path.empty() && target_column.empty()) {
        std::cerr << "ridge: --csv requires --target\n";
        return 2;
      }
      if (!csv_path.empty() && cfg.n_values.empty()) {
        const auto probe = ulnml::load_csv(csv_path, target_column, false);
        cfg.n_values = {static_cast<int>(probe.X.rows())};
      }

      const auto results = ulnml::run_ridge_experiments(cfg);
      ulnml::write_results_csv(out_path, results, timing);
      json cfg_json;
      cfg_json["kind"] = "ridge";
      cfg_json["data"] = csv_path.empty() ? ("synthetic-" + synthetic) : csv_path;
      cfg_json["informative"] = informative;
      cfg_json["irrelevant"] = irrelevant;
      cfg_json["noise_sd"] = noise_sd;
      cfg_json["beta_star"] = "unit coefficients on informative features";
      cfg_json["n"] = cfg.n_values;
      cfg_json["seeds"] = seeds;
      cfg_json["methods"] = methods;
      cfg_json["grid"] = {grid_lo, grid_hi, grid_count};
      cfg_json["lambda_box"] = {box_lo, box_hi};
      cfg_json["sigma_rel_bounds"] = {sigma_rel_lo, sigma_rel_hi};
      cfg_json["multistart"] = multistart;
      if (!summary_path.empty()) {
        ulnml::write_json_summary(summary_path, results, cfg_json.dump());
      }
      std::cerr << "generator: " << cfg_json.dump() << "\n";
      std::cout << "wrote " << results.size() << " rows to " << out_path << "\n";
      return 0;
    }

    if (ggm->parsed()) {
      ulnml::GgmExperimentConfig cfg;
      cfg.m_values = m_values;
      cfg.n_values = ggm_n_values;
      cfg.seeds = ggm_seeds;
      cfg.methods = ggm_methods;
      cfg.kfold = ggm_kfold;
      cfg.grid = {ggm_grid_lo, ggm_grid_hi, ggm_grid_count};
      cfg.lambda_box = {ggm_box_lo, ggm_box_hi};
      cfg.radius_factor = radius_factor;
      cfg.max_iter = ggm_max_iter;
      cfg.rel_tol = ggm_rel_tol;
      cfg.ebic_gamma = ebic_gamma;
      cfg.threads = ggm_threads;
      cfg.record_timing = ggm_timing;

      const auto results = ulnml::run_ggm_experiments(cfg);
      ulnml::write_results_csv(ggm_out, results, ggm_timing);
      json cfg_json;
      cfg_json["kind"] = "ggm";
      cfg_json["model"] = "double-ring, unit diagonal, 0.25 couplings at lags 1-2";
      cfg_json["baseline_note"] =
          "grid methods use the scalar quadratic-penalty family, not l1 glasso";
      cfg_json["m"] = m_values;
      cfg_json["n"] = ggm_n_values;
      cfg_json["seeds"] = ggm_seeds;
      cfg_json["methods"] = ggm_methods;
      cfg_json["grid"] = {ggm_grid_lo, ggm_grid_hi, ggm_grid_count};
      cfg_json["lambda_box"] = {ggm_box_lo, ggm_box_hi};
      cfg_json["radius_factor"] = radius_factor;
      if (!ggm_summary.empty()) {
        ulnml::write_json_summary(ggm_summary, results, cfg_json.dump());
      }
      std::cerr << "generator: " << cfg_json.dump() << "\n";
      std::cout << "wrote " << results.size() << " rows to " << ggm_out << "\n";
      return 0;
    }

    if (bc->parsed()) {
      return run_boundcheck(domain, B, bc_lo, bc_hi, bc_count, bc_lambdas);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
