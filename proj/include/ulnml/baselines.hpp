#ifndef ULNML_BASELINES_HPP
#define ULNML_BASELINES_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "ulnml/core.hpp"

namespace ulnml {

/// Logarithmically even grid specification, endpoints included exactly.
struct GridSpec {
  double lo = 1e-4;
  double hi = 1.0;
  int count = 20;
};

/// Geometric progression from lo to hi inclusive, strictly increasing,
/// bit-exact across runs.
std::vector<double> grid_points(const GridSpec& spec);

/// Seeded near-equal partition of {0..n-1} into k folds. Folds are
/// disjoint and exhaustive; every fold is non-empty (requires k <= n).
std::vector<std::vector<int>> make_folds(int n, int k, std::uint64_t seed);

/// Fit on the train rows at scalar weight lambda, return the mean held-out
/// negative log-likelihood over the test rows.
using FitScoreFn = std::function<double(const std::vector<int>& train_rows,
                                        const std::vector<int>& test_rows, double lambda)>;

/// K-fold cross-validation over a scalar weight grid; returns the argmin of
/// the mean held-out score, ties resolved toward the smaller weight.
double kfold_cv_select(int n_rows, const FitScoreFn& fit_score, const std::vector<double>& grid,
                       int k, std::uint64_t seed);

enum class InfoCriterion { aic, bic, ebic };

struct IcEvaluation {
  double nll = 0.0;  // negative log-likelihood at the fit
  double df = 0.0;   // effective degrees of freedom of the fit
};

using IcEvalFn = std::function<IcEvaluation(double lambda)>;

/// Grid selection by information criterion: score = 2 nll + penalty * df
/// with penalty 2 (aic), log n (bic), or log n + 2 gamma log(candidate
/// count) per df (ebic, gamma default 0.5). Ties toward the smaller weight.
double ic_select(const IcEvalFn& evaluate, const std::vector<double>& grid,
                 InfoCriterion criterion, int n, double ebic_gamma = 0.5,
                 double candidate_count = 1.0);

/// Ridge effective degrees of freedom tr[(C + lambda I)^{-1} C].
double ridge_df(const Matrix& gram, double lambda);

/// Coordinate-descent solver for (1/(2n)) ||y - X beta||^2 + lambda ||beta||_1;
/// lives here solely to back the lasso grid-search baseline.
Vector lasso_fit(const Matrix& X, const Vector& y, double lambda,
                 const Vector* warm_start = nullptr, int max_sweeps = 1000, double tol = 1e-8);

}  // namespace ulnml

#endif  // ULNML_BASELINES_HPP
