#include "ulnml/experiments.hpp"

#include <json.hpp>

#include <Eigen/Cholesky>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "ulnml/ggm.hpp"
#include "ulnml/mdlrs.hpp"
#include "ulnml/normalizer.hpp"
#include "ulnml/ridge.hpp"

namespace ulnml {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

using json = nlohmann::json;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return std::max(1u, std::min(hw, 16u));
}

template <typename Fn>
void parallel_for(std::size_t n_tasks, int threads, Fn&& fn) {
  threads = std::min<std::size_t>(std::max(threads, 1), n_tasks);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_tasks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<int> shuffled_indices(int n, std::uint64_t seed) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(idx[i], idx[pick(rng)]);
  }
  return idx;
}

Matrix take_rows(const Matrix& X, const std::vector<int>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
  return out;
}

Vector take(const Vector& v, const std::vector<int>& rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[rows[i]];
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string csv_quote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

double lambda_median(const Vector& w) {
  std::vector<double> v(w.data(), w.data() + w.size());
  return median(std::move(v));
}

struct RidgeCellData {
  Matrix X_train, X_test;
  Vector y_train, y_test;
  double y_train_mean = 0.0;
  Interval sigma_bounds;
};

double gaussian_nll(const Vector& residual, double sigma2) {
  return residual.squaredNorm() / (2.0 * sigma2) +
         0.5 * static_cast<double>(residual.size()) * (kLog2Pi + std::log(sigma2));
}

}  // namespace

double median(std::vector<double> values) {
  detail::require(!values.empty(), "median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

const std::vector<std::string>& ridge_method_names() {
  static const std::vector<std::string> names{"mdlrs-full", "mdlrs-diag", "cv-ridge",
                                              "aic-ridge",  "bic-ridge",  "cv-lasso"};
  return names;
}

const std::vector<std::string>& ggm_method_names() {
  static const std::vector<std::string> names{"mdlrs", "cv-grid", "aic-grid", "bic-grid",
                                              "ebic-grid"};
  return names;
}

namespace {

ExperimentResult run_ridge_cell(const RidgeExperimentConfig& cfg, const std::string& method,
                                int n, std::uint64_t seed, const RegressionDataset* csv_data) {
  // The dataset and split depend only on (n, seed) so every method sees the
  // same cell data.
  RegressionDataset ds;
  if (csv_data) {
    const auto order = shuffled_indices(static_cast<int>(csv_data->X.rows()),
                                        seed_mix(seed, static_cast<std::uint64_t>(n), 0xC5));
    std::vector<int> rows(order.begin(), order.begin() + n);
    ds.X = take_rows(csv_data->X, rows);
    ds.y = take(csv_data->y, rows);
  } else {
    ds = gen_synth_regression(n, cfg.informative, cfg.irrelevant, cfg.correlated, cfg.noise_sd,
                              seed_mix(seed, static_cast<std::uint64_t>(n), 0x9D));
    if (cfg.standardize) {
      standardize_columns(ds.X);
      ds.meta.standardized = true;
    }
  }

  const int n_test = std::max(1, static_cast<int>(std::floor(cfg.test_fraction * n)));
  const auto order = shuffled_indices(n, seed_mix(seed, static_cast<std::uint64_t>(n), 0xA7));
  std::vector<int> test_rows(order.begin(), order.begin() + n_test);
  std::vector<int> train_rows(order.begin() + n_test, order.end());

  RidgeCellData cell;
  cell.X_train = take_rows(ds.X, train_rows);
  cell.X_test = take_rows(ds.X, test_rows);
  cell.y_train = take(ds.y, train_rows);
  cell.y_test = take(ds.y, test_rows);
  cell.y_train_mean = cell.y_train.mean();
  cell.y_train.array() -= cell.y_train_mean;

  // Variance-scaled clamp: wide enough to stay slack for legitimate fits,
  // tight enough to price near-interpolation honestly when p ~ n.
  const double var_y =
      std::max(cell.y_train.squaredNorm() / static_cast<double>(cell.y_train.size()), 1e-12);
  cell.sigma_bounds = cfg.sigma_bounds.lo > 0.0 && cfg.sigma_bounds.hi >= cfg.sigma_bounds.lo
                          ? Interval{cfg.sigma_bounds.lo * var_y, cfg.sigma_bounds.hi * var_y}
                          : Interval{var_y / 64.0, var_y * 64.0};

  const Eigen::Index p = cell.X_train.cols();
  const auto t0 = std::chrono::steady_clock::now();

  json extra;
  double metric = 0.0;

  const auto test_rmse = [&](const Vector& beta) {
    const Vector y_hat = predict(beta, cell.X_test).array() + cell.y_train_mean;
    return rmse(y_hat, cell.y_test);
  };

  const auto grid = grid_points(cfg.grid);

  if (method == "mdlrs-full" || method == "mdlrs-diag") {
    const auto mode = method == "mdlrs-full" ? RidgeProblem::NormalizerMode::full
                                             : RidgeProblem::NormalizerMode::diagonal;
    const RidgeProblem problem(cell.X_train, cell.y_train, cell.sigma_bounds, mode);
    const Box box = Box::uniform(cfg.lambda_box.lo, cfg.lambda_box.hi, p);
    std::vector<Lambda> inits;
    for (double s : cfg.multistart) {
      inits.push_back(Lambda::project(Vector::Constant(p, s), box));
    }
    if (inits.empty()) inits.push_back(Lambda::midpoint(box));
    const FitTrace trace =
        fit_multistart(problem, inits, StopRule(cfg.max_iter, cfg.rel_tol));
    const RidgeSolution sol = problem.unpack(trace.final().theta);
    metric = test_rmse(sol.beta);
    extra["iterations"] = trace.iterations.size();
    extra["converged"] = trace.converged;
    extra["sigma2"] = sol.sigma2;
    extra["lambda_min"] = trace.final().lambda.minCoeff();
    extra["lambda_median"] = lambda_median(trace.final().lambda);
    extra["lambda_max"] = trace.final().lambda.maxCoeff();
    extra["ulnml"] = trace.final().ulnml;
  } else if (method == "cv-ridge") {
    const auto fit_score = [&](const std::vector<int>& train, const std::vector<int>& test,
                               double lambda) {
      const Matrix Xf = take_rows(cell.X_train, train);
      const Vector yf = take(cell.y_train, train);
      const RidgeProblem fold(Xf, yf, cell.sigma_bounds);
      const RidgeSolution sol =
          solve_ridge(fold, Lambda::project(Vector::Constant(p, lambda),
                                            Box::uniform(lambda, lambda, p)));
      const Matrix Xt = take_rows(cell.X_train, test);
      const Vector yt = take(cell.y_train, test);
      const Vector r = yt - Xt * sol.beta;
      return gaussian_nll(r, sol.sigma2) / static_cast<double>(test.size());
    };
    const double lambda = kfold_cv_select(
        static_cast<int>(cell.y_train.size()), fit_score, grid, cfg.kfold,
        seed_mix(seed, static_cast<std::uint64_t>(n), 0xF0));
    const RidgeProblem problem(cell.X_train, cell.y_train, cell.sigma_bounds);
    const RidgeSolution sol = solve_ridge(
        problem, Lambda::project(Vector::Constant(p, lambda), Box::uniform(lambda, lambda, p)));
    metric = test_rmse(sol.beta);
    extra["selected_lambda"] = lambda;
  } else if (method == "aic-ridge" || method == "bic-ridge") {
    const RidgeProblem problem(cell.X_train, cell.y_train, cell.sigma_bounds);
    const auto evaluate = [&](double lambda) {
      const RidgeSolution sol = solve_ridge(
          problem, Lambda::project(Vector::Constant(p, lambda), Box::uniform(lambda, lambda, p)));
      const Vector r = cell.y_train - cell.X_train * sol.beta;
      return IcEvaluation{gaussian_nll(r, sol.sigma2), ridge_df(problem.gram(), lambda)};
    };
    const double lambda = ic_select(
        evaluate, grid, method == "aic-ridge" ? InfoCriterion::aic : InfoCriterion::bic,
        static_cast<int>(cell.y_train.size()));
    const RidgeSolution sol = solve_ridge(
        problem, Lambda::project(Vector::Constant(p, lambda), Box::uniform(lambda, lambda, p)));
    metric = test_rmse(sol.beta);
    extra["selected_lambda"] = lambda;
  } else if (method == "cv-lasso") {
    const auto fit_score = [&](const std::vector<int>& train, const std::vector<int>& test,
                               double lambda) {
      const Matrix Xf = take_rows(cell.X_train, train);
      const Vector yf = take(cell.y_train, train);
      const Vector beta = lasso_fit(Xf, yf, lambda);
      const double sigma2 =
          std::max((yf - Xf * beta).squaredNorm() / static_cast<double>(yf.size()), 1e-12);
      const Vector r = take(cell.y_train, test) - take_rows(cell.X_train, test) * beta;
      return gaussian_nll(r, sigma2) / static_cast<double>(test.size());
    };
    const double lambda = kfold_cv_select(
        static_cast<int>(cell.y_train.size()), fit_score, grid, cfg.kfold,
        seed_mix(seed, static_cast<std::uint64_t>(n), 0xF0));
    const Vector beta = lasso_fit(cell.X_train, cell.y_train, lambda);
    metric = test_rmse(beta);
    extra["selected_lambda"] = lambda;
    extra["nonzero"] = (beta.array().abs() > 1e-12).count();
  } else {
    std::string known;
    for (const auto& name : ridge_method_names()) known += " " + name;
    throw std::invalid_argument("ulnml: unknown ridge method '" + method + "'; registered:" +
                                known);
  }

  const auto t1 = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.method = method;
  result.n = n;
  result.dim = static_cast<int>(p);
  result.seed = seed;
  result.metric = metric;
  result.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  result.extra_json = extra.dump();
  return result;
}

}  // namespace

std::vector<ExperimentResult> run_ridge_experiments(const RidgeExperimentConfig& cfg) {
  detail::require(!cfg.methods.empty(), "no methods requested");
  detail::require(!cfg.n_values.empty(), "no sample sizes requested");
  detail::require(cfg.seeds >= 1, "need at least one seed");
  for (const auto& m : cfg.methods) {
    if (std::find(ridge_method_names().begin(), ridge_method_names().end(), m) ==
        ridge_method_names().end()) {
      std::string known;
      for (const auto& name : ridge_method_names()) known += " " + name;
      throw std::invalid_argument("ulnml: unknown ridge method '" + m + "'; registered:" + known);
    }
  }

  RegressionDataset csv_data;
  const RegressionDataset* csv_ptr = nullptr;
  if (!cfg.csv_path.empty()) {
    csv_data = load_csv(cfg.csv_path, cfg.target_column, cfg.standardize);
    for (int n : cfg.n_values) {
      detail::require(n <= csv_data.X.rows(), "requested n exceeds csv rows");
    }
    csv_ptr = &csv_data;
  }

  struct Cell {
    std::string method;
    int n;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  std::vector<std::string> methods = cfg.methods;
  std::sort(methods.begin(), methods.end());
  for (const auto& method : methods) {
    for (int n : cfg.n_values) {
      for (int s = 0; s < cfg.seeds; ++s) {
        cells.push_back({method, n, static_cast<std::uint64_t>(s)});
      }
    }
  }

  std::vector<ExperimentResult> results(cells.size());
  parallel_for(cells.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    results[i] = run_ridge_cell(cfg, cells[i].method, cells[i].n, cells[i].seed, csv_ptr);
  });
  return results;
}

namespace {

double ggm_holdout_nll(const Matrix& scatter_test, Eigen::Index n_test, const Matrix& theta) {
  Eigen::LLT<Matrix> llt(theta);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("ulnml: held-out scoring needs a positive definite precision");
  }
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double m = static_cast<double>(theta.rows());
  return 0.5 * scatter_test.cwiseProduct(theta).sum() / static_cast<double>(n_test) -
         0.5 * logdet + 0.5 * m * kLog2Pi;
}

double ggm_edge_df(const Matrix& theta) {
  const Eigen::Index m = theta.rows();
  double edges = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (std::abs(theta(i, j)) > 1e-3) edges += 1.0;
    }
  }
  return edges + static_cast<double>(m);
}

ExperimentResult run_ggm_cell(const GgmExperimentConfig& cfg, const std::string& method, int m,
                              int n, std::uint64_t seed) {
  const Matrix X = double_ring_sample(
      m, n, seed_mix(seed, static_cast<std::uint64_t>(m) * 1000003ull + n, 0x6E));
  const Matrix S = X.transpose() * X;
  const double radius = cfg.radius_factor * S.diagonal().maxCoeff() / static_cast<double>(n);
  const GgmProblem problem(S, n, radius);
  const Matrix theta_true = double_ring_precision(m);

  const auto t0 = std::chrono::steady_clock::now();
  json extra;
  extra["R"] = radius;
  double metric = 0.0;

  const auto grid = grid_points(cfg.grid);

  if (method == "mdlrs") {
    const Box box = Box::uniform(cfg.lambda_box.lo, cfg.lambda_box.hi, problem.pair_count());
    std::vector<Lambda> inits;
    for (double s : cfg.multistart) {
      inits.push_back(
          Lambda::project(s * box.geometric_midpoint(), box));
    }
    if (inits.empty()) inits.push_back(Lambda::midpoint(box));
    const FitTrace trace = fit_multistart(problem, inits, StopRule(cfg.max_iter, cfg.rel_tol));
    const Matrix theta_hat =
        Eigen::Map<const Matrix>(trace.final().theta.data(), m, m);
    metric = kl_gaussian(theta_true, theta_hat);
    extra["iterations"] = trace.iterations.size();
    extra["converged"] = trace.converged;
    extra["lambda_min"] = trace.final().lambda.minCoeff();
    extra["lambda_median"] = lambda_median(trace.final().lambda);
    extra["lambda_max"] = trace.final().lambda.maxCoeff();
    extra["ulnml"] = trace.final().ulnml;
  } else if (method == "cv-grid" || method == "aic-grid" || method == "bic-grid" ||
             method == "ebic-grid") {
    extra["note"] = "scalar quadratic-penalty grid baseline (stands in for the l1 glasso family)";
    const auto scalar_matrix = [&](double lambda) {
      Matrix lam = Matrix::Constant(m, m, lambda);
      lam.diagonal().setZero();
      return lam;
    };
    double lambda_sel;
    if (method == "cv-grid") {
      const auto fit_score = [&](const std::vector<int>& train, const std::vector<int>& test,
                                 double lambda) {
        const Matrix Xf = take_rows(X, train);
        const Matrix Sf = Xf.transpose() * Xf;
        const GgmProblem fold(Sf, static_cast<Eigen::Index>(train.size()),
                              cfg.radius_factor * Sf.diagonal().maxCoeff() /
                                  static_cast<double>(train.size()));
        const PrecisionEstimate est = solve_ggm(fold, scalar_matrix(lambda));
        const Matrix Xt = take_rows(X, test);
        return ggm_holdout_nll(Xt.transpose() * Xt, static_cast<Eigen::Index>(test.size()),
                               est.theta);
      };
      lambda_sel = kfold_cv_select(
          n, fit_score, grid, cfg.kfold,
          seed_mix(seed, static_cast<std::uint64_t>(m) * 1000003ull + n, 0xF1));
    } else {
      const auto evaluate = [&](double lambda) {
        const PrecisionEstimate est = solve_ggm(problem, scalar_matrix(lambda));
        const double nll = problem.objective_at(est.theta, Matrix::Zero(m, m));
        return IcEvaluation{nll, ggm_edge_df(est.theta)};
      };
      const InfoCriterion crit = method == "aic-grid"
                                     ? InfoCriterion::aic
                                     : (method == "bic-grid" ? InfoCriterion::bic
                                                             : InfoCriterion::ebic);
      lambda_sel = ic_select(evaluate, grid, crit, n, cfg.ebic_gamma,
                             static_cast<double>(problem.pair_count()));
    }
    const PrecisionEstimate est = solve_ggm(problem, scalar_matrix(lambda_sel));
    metric = kl_gaussian(theta_true, est.theta);
    extra["selected_lambda"] = lambda_sel;
    extra["converged"] = est.converged;
  } else {
    std::string known;
    for (const auto& name : ggm_method_names()) known += " " + name;
    throw std::invalid_argument("ulnml: unknown ggm method '" + method + "'; registered:" +
                                known);
  }

  const auto t1 = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.method = method;
  result.n = n;
  result.dim = m;
  result.seed = seed;
  result.metric = metric;
  result.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  result.extra_json = extra.dump();
  return result;
}

}  // namespace

std::vector<ExperimentResult> run_ggm_experiments(const GgmExperimentConfig& cfg) {
  detail::require(!cfg.methods.empty(), "no methods requested");
  detail::require(!cfg.n_values.empty(), "no sample sizes requested");
  detail::require(!cfg.m_values.empty(), "no dimensions requested");
  detail::require(cfg.seeds >= 1, "need at least one seed");
  for (const auto& m : cfg.methods) {
    if (std::find(ggm_method_names().begin(), ggm_method_names().end(), m) ==
        ggm_method_names().end()) {
      std::string known;
      for (const auto& name : ggm_method_names()) known += " " + name;
      throw std::invalid_argument("ulnml: unknown ggm method '" + m + "'; registered:" + known);
    }
  }
  for (int m : cfg.m_values) detail::require(m >= 5, "double ring requires m >= 5");

  struct Cell {
    std::string method;
    int m;
    int n;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  std::vector<std::string> methods = cfg.methods;
  std::sort(methods.begin(), methods.end());
  for (const auto& method : methods) {
    for (int n : cfg.n_values) {
      for (int m : cfg.m_values) {
        for (int s = 0; s < cfg.seeds; ++s) {
          cells.push_back({method, m, n, static_cast<std::uint64_t>(s)});
        }
      }
    }
  }

  std::vector<ExperimentResult> results(cells.size());
  parallel_for(cells.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    results[i] = run_ggm_cell(cfg, cells[i].method, cells[i].m, cells[i].n, cells[i].seed);
  });
  return results;
}

std::string results_csv_string(const std::vector<ExperimentResult>& results, bool record_timing) {
  std::vector<const ExperimentResult*> sorted;
  sorted.reserve(results.size());
  for (const auto& r : results) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const ExperimentResult* a, const ExperimentResult* b) {
    return std::tie(a->method, a->n, a->dim, a->seed) < std::tie(b->method, b->n, b->dim, b->seed);
  });

  std::string out = "method,n,dim,seed,metric,wall_time_ms,extra_json\n";
  for (const auto* r : sorted) {
    out += r->method;
    out += "," + std::to_string(r->n);
    out += "," + std::to_string(r->dim);
    out += "," + std::to_string(r->seed);
    out += "," + format_double(r->metric);
    if (record_timing) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.3f", r->wall_time_ms);
      out += std::string(",") + buf;
    } else {
      out += ",0";
    }
    out += "," + csv_quote(r->extra_json);
    out += "\n";
  }
  return out;
}

void write_results_csv(const std::string& path, const std::vector<ExperimentResult>& results,
                       bool record_timing) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("ulnml: cannot write " + path);
  out << results_csv_string(results, record_timing);
}

void write_json_summary(const std::string& path, const std::vector<ExperimentResult>& results,
                        const std::string& config_json) {
  json summary;
  summary["config"] = json::parse(config_json.empty() ? "{}" : config_json);

  std::map<std::string, std::vector<double>> groups;
  for (const auto& r : results) {
    groups[r.method + "/n=" + std::to_string(r.n) + "/dim=" + std::to_string(r.dim)].push_back(
        r.metric);
  }
  json cells = json::object();
  for (auto& [key, metrics] : groups) {
    json cell;
    cell["count"] = metrics.size();
    cell["median_metric"] = median(metrics);
    cell["mean_metric"] =
        std::accumulate(metrics.begin(), metrics.end(), 0.0) / metrics.size();
    cells[key] = cell;
  }
  summary["cells"] = cells;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("ulnml: cannot write " + path);
  out << summary.dump(2) << "\n";
}

}  // namespace ulnml
