#include "ulnml/baselines.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ulnml {

std::vector<double> grid_points(const GridSpec& spec) {
  detail::require(spec.lo > 0.0 && spec.lo < spec.hi, "grid requires 0 < lo < hi");
  detail::require(spec.count >= 2, "grid requires at least two points");
  std::vector<double> points(spec.count);
  const double ratio = spec.hi / spec.lo;
  for (int i = 0; i < spec.count; ++i) {
    points[i] = spec.lo * std::pow(ratio, static_cast<double>(i) / (spec.count - 1));
  }
  points.front() = spec.lo;
  points.back() = spec.hi;
  return points;
}

std::vector<std::vector<int>> make_folds(int n, int k, std::uint64_t seed) {
  detail::require(k >= 2, "k-fold requires k >= 2");
  detail::require(n >= k, "k-fold requires n >= k");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(perm[i], perm[pick(rng)]);
  }
  std::vector<std::vector<int>> folds(k);
  for (int i = 0; i < n; ++i) folds[i % k].push_back(perm[i]);
  return folds;
}

double kfold_cv_select(int n_rows, const FitScoreFn& fit_score, const std::vector<double>& grid,
                       int k, std::uint64_t seed) {
  detail::require(!grid.empty(), "grid must be non-empty");
  const auto folds = make_folds(n_rows, k, seed);
  for (const auto& f : folds) {
    if (f.empty()) throw std::runtime_error("ulnml: cross-validation fold has zero rows");
  }

  std::vector<std::vector<int>> train_sets(folds.size());
  for (std::size_t i = 0; i < folds.size(); ++i) {
    for (std::size_t j = 0; j < folds.size(); ++j) {
      if (j == i) continue;
      train_sets[i].insert(train_sets[i].end(), folds[j].begin(), folds[j].end());
    }
    std::sort(train_sets[i].begin(), train_sets[i].end());
  }

  double best_score = std::numeric_limits<double>::infinity();
  double best_lambda = grid.front();
  for (double lambda : grid) {
    double score = 0.0;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      score += fit_score(train_sets[i], folds[i], lambda);
    }
    score /= static_cast<double>(folds.size());
    if (score < best_score) {  // strict: ties keep the smaller lambda
      best_score = score;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

double ic_select(const IcEvalFn& evaluate, const std::vector<double>& grid,
                 InfoCriterion criterion, int n, double ebic_gamma, double candidate_count) {
  detail::require(!grid.empty(), "grid must be non-empty");
  detail::require(n >= 1, "sample count must be positive");
  double penalty;
  switch (criterion) {
    case InfoCriterion::aic:
      penalty = 2.0;
      break;
    case InfoCriterion::bic:
      penalty = std::log(static_cast<double>(n));
      break;
    case InfoCriterion::ebic:
      penalty = std::log(static_cast<double>(n)) +
                2.0 * ebic_gamma * std::log(std::max(candidate_count, 1.0));
      break;
    default:
      throw std::invalid_argument("ulnml: unknown information criterion");
  }
  double best_score = std::numeric_limits<double>::infinity();
  double best_lambda = grid.front();
  for (double lambda : grid) {
    const IcEvaluation eval = evaluate(lambda);
    const double score = 2.0 * eval.nll + penalty * eval.df;
    if (score < best_score) {
      best_score = score;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

double ridge_df(const Matrix& gram, double lambda) {
  detail::require(lambda > 0.0, "ridge df needs positive lambda");
  Matrix A = gram;
  A.diagonal().array() += lambda;
  return A.ldlt().solve(gram).trace();
}

Vector lasso_fit(const Matrix& X, const Vector& y, double lambda, const Vector* warm_start,
                 int max_sweeps, double tol) {
  detail::require(X.rows() == y.size(), "design/target row mismatch");
  detail::require(lambda >= 0.0, "lasso weight must be nonnegative");
  const Eigen::Index n = X.rows(), p = X.cols();
  const double nd = static_cast<double>(n);
  Vector beta = (warm_start && warm_start->size() == p) ? *warm_start : Vector::Zero(p);
  const Vector col_ss = X.colwise().squaredNorm() / nd;
  Vector residual = y - X * beta;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_ss[j] <= 0.0) continue;
      const double old = beta[j];
      const double rho = X.col(j).dot(residual) / nd + col_ss[j] * old;
      const double shrunk = std::abs(rho) <= lambda
                                ? 0.0
                                : (rho > 0 ? rho - lambda : rho + lambda) / col_ss[j];
      if (shrunk != old) {
        residual += X.col(j) * (old - shrunk);
        beta[j] = shrunk;
        max_change = std::max(max_change, std::abs(shrunk - old));
      }
    }
    if (max_change < tol) break;
  }
  return beta;
}

}  // namespace ulnml
