#include "ulnml/normalizer.hpp"

#include <cmath>

namespace ulnml {

namespace {

constexpr double kHalfLogE2Pi = -0.4189385332046727;  // (1/2) log(e / 2 pi)

void check_dims(const Vector& h_diag, const Lambda& lambda) {
  detail::require(h_diag.size() == lambda.dim(),
                  "smoothness diagonal and lambda dimension mismatch");
  detail::require(h_diag.minCoeff() >= 0.0, "smoothness diagonal must be nonnegative");
}

}  // namespace

NormalizerBound log_normalizer_tikhonov(const Vector& h_diag, const Lambda& lambda,
                                        double scale) {
  check_dims(h_diag, lambda);
  detail::require(scale > 0.0, "penalty scale must be positive");
  NormalizerBound out;
  out.per_coord.resize(lambda.dim());
  for (Eigen::Index j = 0; j < lambda.dim(); ++j) {
    out.per_coord[j] = 0.5 * std::log1p(h_diag[j] / (scale * lambda[j]));
  }
  out.value = out.per_coord.sum();
  return out;
}

NormalizerBound log_normalizer_lasso(const Vector& h_diag, const Lambda& lambda) {
  check_dims(h_diag, lambda);
  NormalizerBound out;
  out.per_coord.resize(lambda.dim());
  for (Eigen::Index j = 0; j < lambda.dim(); ++j) {
    out.per_coord[j] = kHalfLogE2Pi + 0.5 * std::log1p(h_diag[j] / (lambda[j] * lambda[j]));
  }
  out.value = out.per_coord.sum();
  return out;
}

double ulnml_objective(const RermProblem& problem, const Vector& theta, const Lambda& lambda) {
  return problem.loss(theta) + penalty_value(problem, theta, lambda) +
         problem.log_normalizer(lambda);
}

}  // namespace ulnml
