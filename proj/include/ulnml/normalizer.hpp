#ifndef ULNML_NORMALIZER_HPP
#define ULNML_NORMALIZER_HPP

#include "ulnml/core.hpp"

namespace ulnml {

/// log of the normalizer upper bound, split into per-coordinate
/// contributions. `value` is always the sum of `per_coord`.
struct NormalizerBound {
  double value = 0.0;
  Vector per_coord;
};

/// Bound for the quadratic penalty (scale/2) * sum_j lambda_j theta_j^2 with
/// diagonal smoothness h: per coordinate (1/2) log((h_j + s lambda_j) / (s lambda_j)).
/// Strictly decreasing and convex in each lambda_j.
NormalizerBound log_normalizer_tikhonov(const Vector& h_diag, const Lambda& lambda,
                                        double scale = 1.0);

/// Bound for the absolute-value penalty sum_j lambda_j |theta_j|: per
/// coordinate (1/2) log(e/2pi) + (1/2) log((h_j + lambda_j^2) / lambda_j^2).
NormalizerBound log_normalizer_lasso(const Vector& h_diag, const Lambda& lambda);

/// Full objective h_X(theta, lambda) = loss + penalty + log normalizer bound.
/// Uses the problem's own normalizer so model-specific bounds are honored.
double ulnml_objective(const RermProblem& problem, const Vector& theta, const Lambda& lambda);

}  // namespace ulnml

#endif  // ULNML_NORMALIZER_HPP
