#include "ulnml/ridge.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "ulnml/convex_step.hpp"
#include "ulnml/normalizer.hpp"

namespace ulnml {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double clamp_interval(double v, Interval iv) { return std::min(iv.hi, std::max(iv.lo, v)); }

Eigen::LDLT<Matrix> factorize(const Matrix& A) {
  Eigen::LDLT<Matrix> ldlt(A);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any()) {
    throw std::runtime_error("ulnml: penalized Gram matrix factorization failed");
  }
  return ldlt;
}

}  // namespace

RidgeProblem::RidgeProblem(Matrix X, Vector y, Interval sigma_bounds, NormalizerMode mode)
    : X_(std::move(X)), y_(std::move(y)), sigma_bounds_(sigma_bounds), mode_(mode) {
  detail::require(X_.rows() >= 1 && X_.cols() >= 1, "design matrix must be non-empty");
  detail::require(X_.rows() == y_.size(), "design/target row mismatch");
  detail::require(sigma_bounds_.lo > 0.0 && sigma_bounds_.lo <= sigma_bounds_.hi,
                  "sigma bounds require 0 < lo <= hi");
  gram_ = X_.transpose() * X_;
  xty_ = X_.transpose() * y_;
}

RidgeSolution solve_ridge(const RidgeProblem& problem, const Lambda& lambda) {
  detail::require(lambda.dim() == problem.p(), "lambda dimension must match feature count");
  Matrix A = problem.gram();
  A.diagonal() += lambda.weights();
  const auto ldlt = factorize(A);
  RidgeSolution s;
  s.beta = ldlt.solve(problem.design().transpose() * problem.target());
  const double rss = (problem.target() - problem.design() * s.beta).squaredNorm();
  const double q = rss + lambda.weights().dot(s.beta.array().square().matrix());
  const double n = static_cast<double>(problem.n());
  s.sigma2 = clamp_interval(q / n, problem.sigma_bounds());
  s.rerm_objective = q / (2.0 * s.sigma2) + 0.5 * n * (kLog2Pi + std::log(s.sigma2));
  return s;
}

double ridge_ulnml(const RidgeProblem& problem, const Lambda& lambda) {
  const RidgeSolution s = solve_ridge(problem, lambda);
  return s.rerm_objective + problem.log_normalizer(lambda);
}

Lambda ridge_convex_step(const RidgeProblem& problem, const RidgeSolution& solution,
                         const Lambda& current) {
  if (problem.mode() == RidgeProblem::NormalizerMode::diagonal) {
    // Decoupled per-coordinate objective with h_j = C_jj; folding the
    // temperature into the coefficient gives the s = 1 closed form.
    const Vector scaled = solution.beta / std::sqrt(solution.sigma2);
    return update_tikhonov(scaled, problem.gram().diagonal(), 1.0, current.box());
  }

  const Eigen::Index p = problem.p();
  Vector lam = current.weights();
  const Box& box = current.box();
  Matrix A = problem.gram();
  A.diagonal() += lam;

  for (int sweep = 0; sweep < 50; ++sweep) {
    // Refresh the inverse each sweep; rank-one updates track coordinate moves.
    Matrix G = factorize(A).solve(Matrix::Identity(p, p));
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double gjj = G(j, j);
      const double denom = 1.0 - lam[j] * gjj;
      // M = [(A - lam_j e_j e_j^T)^{-1}]_jj via Sherman-Morrison; denom -> 0
      // means the Gram matrix is singular in this coordinate without its
      // ridge term, pushing the minimizer to the lower corner.
      const double M = denom > 1e-14 ? gjj / denom : 1e300;
      const double w = solution.beta[j] * solution.beta[j] / (2.0 * solution.sigma2);
      double next;
      if (w <= 0.0) {
        next = box.hi(j);  // only the decreasing normalizer term remains
      } else {
        next = 1.0 / (w + std::sqrt(w * w + 2.0 * w * M));
      }
      next = box.clamp(next, j);
      const double delta = next - lam[j];
      if (std::abs(delta) > 0.0) {
        const Vector gj = G.col(j);
        G.noalias() -= gj * gj.transpose() * (delta / (1.0 + delta * gjj));
        A(j, j) += delta;
        lam[j] = next;
      }
      max_change = std::max(max_change, std::abs(delta));
    }
    if (max_change < 1e-8) break;
  }
  return Lambda::project(lam, box);
}

Vector RidgeProblem::pack(const RidgeSolution& s) const {
  Vector theta(p() + 1);
  theta.head(p()) = s.beta;
  theta[p()] = s.sigma2;
  return theta;
}

RidgeSolution RidgeProblem::unpack(const Vector& theta) const {
  detail::require(theta.size() == p() + 1, "theta must pack [beta; sigma2]");
  RidgeSolution s;
  s.beta = theta.head(p());
  s.sigma2 = theta[p()];
  detail::require(s.sigma2 > 0.0, "sigma2 must be positive");
  return s;
}

Vector RidgeProblem::solve(const Lambda& lambda, const Vector*) const {
  return pack(solve_ridge(*this, lambda));
}

double RidgeProblem::loss(const Vector& theta) const {
  const RidgeSolution s = unpack(theta);
  const double rss = (y_ - X_ * s.beta).squaredNorm();
  const double n = static_cast<double>(this->n());
  return rss / (2.0 * s.sigma2) + 0.5 * n * (kLog2Pi + std::log(s.sigma2));
}

Vector RidgeProblem::penalty_features(const Vector& theta) const {
  const RidgeSolution s = unpack(theta);
  return (s.beta.array().square() / (2.0 * s.sigma2)).matrix();
}

UpperSmoothness RidgeProblem::smoothness() const {
  return UpperSmoothness::diagonal(gram_.diagonal());
}

PenaltyKind RidgeProblem::penalty_kind() const { return PenaltyKind::Tikhonov(1.0); }

double RidgeProblem::log_normalizer(const Lambda& lambda) const {
  detail::require(lambda.dim() == p(), "lambda dimension must match feature count");
  if (mode_ == NormalizerMode::diagonal) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < p(); ++j) {
      sum += 0.5 * std::log1p(gram_(j, j) / lambda[j]);
    }
    return sum;
  }
  Matrix A = gram_;
  A.diagonal() += lambda.weights();
  const auto ldlt = factorize(A);
  const double logdet = ldlt.vectorD().array().log().sum();
  return 0.5 * (logdet - lambda.weights().array().log().sum());
}

Lambda RidgeProblem::convex_step(const Vector& theta, const Lambda& current) const {
  return ridge_convex_step(*this, unpack(theta), current);
}

Vector predict(const Vector& beta, const Matrix& X_new) {
  detail::require(X_new.cols() == beta.size(), "prediction dimension mismatch");
  return X_new * beta;
}

double rmse(const Vector& y_hat, const Vector& y_true) {
  detail::require(y_hat.size() == y_true.size(), "rmse length mismatch");
  detail::require(y_hat.size() > 0, "rmse needs at least one value");
  return std::sqrt((y_hat - y_true).squaredNorm() / static_cast<double>(y_hat.size()));
}

}  // namespace ulnml
