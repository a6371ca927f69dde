#ifndef ULNML_GGM_HPP
#define ULNML_GGM_HPP

#include <cstdint>

#include "ulnml/core.hpp"

namespace ulnml {

struct PrecisionEstimate {
  Matrix theta;          // symmetric positive definite
  double objective = 0.0;
  bool converged = true;     // gradient tolerance reached
  bool radius_ok = true;     // post-hoc diag(theta^{-1}) <= R check
};

/// Zero-mean Gaussian precision estimation with quadratic off-diagonal
/// penalty (diagonal unpenalized):
///   min over PD Theta of
///     (1/2) [tr(S Theta) - n log det(2 pi Theta)] + sum_{i != j} lambda_ij Theta_ij^2
/// with S = X^T X. The smoothness constant is h0 = m n R^2 where R bounds
/// diag(Theta^{-1}); R is not actively projected, it is chosen slack
/// (default 10 max_i S_ii / n) and checked after each solve.
///
/// Weights are tied symmetric; the free coordinates are the m(m-1)/2 pairs
/// i < j, packed row-major by pair_index.
class GgmProblem : public RermProblem {
 public:
  GgmProblem(Matrix scatter, Eigen::Index n, double radius = 0.0);

  Eigen::Index m() const { return scatter_.rows(); }
  Eigen::Index n() const { return n_; }
  const Matrix& scatter() const { return scatter_; }
  double radius() const { return radius_; }
  double h0() const { return h0_; }
  Eigen::Index pair_count() const { return m() * (m() - 1) / 2; }

  Eigen::Index pair_index(Eigen::Index i, Eigen::Index j) const;
  Vector pack_pairs(const Matrix& sym) const;
  Matrix unpack_pairs(const Vector& pairs) const;

  // RermProblem contract. theta is Theta flattened row-major (m^2 entries).
  Eigen::Index dim_theta() const override { return m() * m(); }
  Eigen::Index dim_lambda() const override { return pair_count(); }
  Vector solve(const Lambda& lambda, const Vector* warm_start = nullptr) const override;
  double loss(const Vector& theta) const override;
  Vector penalty_features(const Vector& theta) const override;
  UpperSmoothness smoothness() const override;
  PenaltyKind penalty_kind() const override;
  double log_normalizer(const Lambda& lambda) const override;
  Lambda convex_step(const Vector& theta, const Lambda& current) const override;

  double objective_at(const Matrix& theta, const Matrix& lambda_mat) const;

 private:
  Matrix scatter_;
  Eigen::Index n_;
  double radius_;
  double h0_;
};

/// Preconditioned projected-free gradient descent with backtracking; any
/// step whose Cholesky fails is rejected by halving, so iterates stay PD.
/// Stops when the penalized gradient max-norm drops below 1e-6 n or after
/// 5000 iterations (non-convergence flags the estimate, objective is still
/// reported). lambda_mat diagonal entries are ignored.
PrecisionEstimate solve_ggm(const GgmProblem& problem, const Matrix& lambda_mat,
                            const Matrix* warm_start = nullptr);

/// Penalized minimum plus the pairwise normalizer
///   sum_{i<j} log((h0 + lambda_ij) / lambda_ij)
/// (both ordered pairs of each tie folded in).
double ggm_ulnml(const GgmProblem& problem, const Matrix& lambda_mat);

/// Closed-form per-pair minimizer of
///   2 lambda Theta_ij^2 + log((h0 + lambda)/lambda)
/// projected into the box; Theta_ij = 0 ties to the upper corner.
Matrix ggm_convex_step(const GgmProblem& problem, const PrecisionEstimate& estimate,
                       const Box& box);

/// Circulant precision matrix with unit diagonal and 0.25 couplings at
/// lags 1 and 2 (mod m). Positive definite for every m >= 5.
Matrix double_ring_precision(Eigen::Index m);

/// n i.i.d. rows from the zero-mean Gaussian with the double-ring
/// precision, deterministically seeded.
Matrix double_ring_sample(Eigen::Index m, Eigen::Index n, std::uint64_t seed);

/// KL divergence between zero-mean Gaussians given by their precisions:
///   (1/2) [tr(theta_hat Sigma*) - m + log det theta_true - log det theta_hat].
double kl_gaussian(const Matrix& theta_true, const Matrix& theta_hat);

}  // namespace ulnml

#endif  // ULNML_GGM_HPP
