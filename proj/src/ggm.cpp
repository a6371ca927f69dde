#include "ulnml/ggm.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <random>

#include "ulnml/convex_step.hpp"

namespace ulnml {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

bool chol_logdet(const Matrix& theta, Eigen::LLT<Matrix>* llt, double* logdet) {
  llt->compute(theta);
  if (llt->info() != Eigen::Success) return false;
  if (logdet) {
    *logdet = 2.0 * llt->matrixLLT().diagonal().array().log().sum();
  }
  return true;
}

Matrix zero_diagonal(Matrix m) {
  m.diagonal().setZero();
  return m;
}

}  // namespace

GgmProblem::GgmProblem(Matrix scatter, Eigen::Index n, double radius)
    : scatter_(std::move(scatter)), n_(n) {
  detail::require(scatter_.rows() == scatter_.cols(), "scatter matrix must be square");
  detail::require(scatter_.rows() >= 1, "scatter matrix must be non-empty");
  detail::require(n_ >= 1, "sample count must be positive");
  detail::require(scatter_.isApprox(scatter_.transpose(), 1e-10), "scatter must be symmetric");
  if (scatter_.diagonal().minCoeff() <= 0.0) {
    throw std::invalid_argument("ulnml: degenerate variable (zero scatter diagonal)");
  }
  const double nd = static_cast<double>(n_);
  radius_ = radius > 0.0 ? radius : 10.0 * scatter_.diagonal().maxCoeff() / nd;
  detail::require(radius_ > 0.0 && std::isfinite(radius_), "radius must be positive");
  h0_ = static_cast<double>(m()) * nd * radius_ * radius_;
}

Eigen::Index GgmProblem::pair_index(Eigen::Index i, Eigen::Index j) const {
  detail::require(0 <= i && i < j && j < m(), "pair index out of range");
  return i * (2 * m() - i - 1) / 2 + (j - i - 1);
}

Vector GgmProblem::pack_pairs(const Matrix& sym) const {
  detail::require(sym.rows() == m() && sym.cols() == m(), "pair matrix dimension mismatch");
  Vector out(pair_count());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m(); ++i) {
    for (Eigen::Index j = i + 1; j < m(); ++j) out[k++] = sym(i, j);
  }
  return out;
}

Matrix GgmProblem::unpack_pairs(const Vector& pairs) const {
  detail::require(pairs.size() == pair_count(), "pair vector dimension mismatch");
  Matrix out = Matrix::Zero(m(), m());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m(); ++i) {
    for (Eigen::Index j = i + 1; j < m(); ++j) {
      out(i, j) = pairs[k];
      out(j, i) = pairs[k];
      ++k;
    }
  }
  return out;
}

double GgmProblem::objective_at(const Matrix& theta, const Matrix& lambda_mat) const {
  Eigen::LLT<Matrix> llt;
  double logdet = 0.0;
  if (!chol_logdet(theta, &llt, &logdet)) {
    throw std::domain_error("ulnml: precision matrix is not positive definite");
  }
  const double nd = static_cast<double>(n_);
  const double loss = 0.5 * scatter_.cwiseProduct(theta).sum() -
                      0.5 * nd * (logdet + static_cast<double>(m()) * kLog2Pi);
  const Matrix lam = zero_diagonal(lambda_mat);
  const double penalty = lam.cwiseProduct(theta.cwiseProduct(theta)).sum();
  return loss + penalty;
}

PrecisionEstimate solve_ggm(const GgmProblem& problem, const Matrix& lambda_mat,
                            const Matrix* warm_start) {
  const Eigen::Index m = problem.m();
  detail::require(lambda_mat.rows() == m && lambda_mat.cols() == m,
                  "weight matrix dimension mismatch");
  const Matrix lam = zero_diagonal(lambda_mat);
  detail::require(lam.isApprox(lam.transpose(), 1e-10), "weight matrix must be symmetric");
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j) detail::require(lam(i, j) > 0.0, "off-diagonal weights must be positive");
    }
  }

  const double nd = static_cast<double>(problem.n());
  const Matrix& S = problem.scatter();
  const double grad_tol = 1e-6 * nd;

  Eigen::LLT<Matrix> llt;
  double logdet = 0.0;
  Matrix theta;
  if (warm_start && warm_start->rows() == m && chol_logdet(*warm_start, &llt, &logdet)) {
    theta = *warm_start;
  } else {
    theta = Matrix::Zero(m, m);
    theta.diagonal() = (nd * S.diagonal().cwiseInverse().array()).matrix();
    if (!chol_logdet(theta, &llt, &logdet)) {
      throw std::runtime_error("ulnml: diagonal initializer is not positive definite");
    }
  }

  const auto objective = [&](double ld) {
    return 0.5 * S.cwiseProduct(theta).sum() -
           0.5 * nd * (ld + static_cast<double>(m) * kLog2Pi) +
           lam.cwiseProduct(theta.cwiseProduct(theta)).sum();
  };
  double obj = objective(logdet);

  PrecisionEstimate est;
  est.converged = false;
  double step = 1.0;

  for (int iter = 0; iter < 5000; ++iter) {
    const Matrix inv = llt.solve(Matrix::Identity(m, m));
    Matrix grad = 0.5 * S - 0.5 * nd * inv + 2.0 * lam.cwiseProduct(theta);
    grad = 0.5 * (grad + grad.transpose());
    if (grad.cwiseAbs().maxCoeff() < grad_tol) {
      est.converged = true;
      break;
    }

    // Diagonal metric dominating the Hessian: the loss block is bounded by
    // (n/2) lambda_max(Theta^{-1})^2 on every coordinate (row-sum bound on
    // the inverse), the penalty block is exactly 2 lambda_ij. Without the
    // rescaling, box-ceiling weights make a uniform step stall long before
    // the gradient tolerance.
    const double rho = inv.cwiseAbs().rowwise().sum().maxCoeff();
    const double loss_curv = 0.5 * nd * rho * rho;
    const Matrix dir = grad.cwiseQuotient(2.0 * lam + Matrix::Constant(m, m, loss_curv));
    const double decrease = grad.cwiseProduct(dir).sum();

    bool accepted = false;
    Eigen::LLT<Matrix> cand_llt;
    double cand_logdet = 0.0;
    for (int halving = 0; halving <= 60; ++halving) {
      Matrix cand = theta - step * dir;
      cand = 0.5 * (cand + cand.transpose());
      if (chol_logdet(cand, &cand_llt, &cand_logdet)) {
        const double cand_obj = 0.5 * S.cwiseProduct(cand).sum() -
                                0.5 * nd * (cand_logdet + static_cast<double>(m) * kLog2Pi) +
                                lam.cwiseProduct(cand.cwiseProduct(cand)).sum();
        if (cand_obj <= obj - 1e-4 * step * decrease) {
          theta = std::move(cand);
          llt = cand_llt;
          logdet = cand_logdet;
          obj = cand_obj;
          accepted = true;
          step = std::min(step * 1.3, 1e6);
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent step representable; keep the iterate
  }

  est.theta = theta;
  est.objective = obj;
  const Matrix inv = llt.solve(Matrix::Identity(m, m));
  est.radius_ok = inv.diagonal().maxCoeff() <= problem.radius() * (1.0 + 1e-9);
  return est;
}

double ggm_ulnml(const GgmProblem& problem, const Matrix& lambda_mat) {
  const PrecisionEstimate est = solve_ggm(problem, lambda_mat);
  double normalizer = 0.0;
  for (Eigen::Index i = 0; i < problem.m(); ++i) {
    for (Eigen::Index j = i + 1; j < problem.m(); ++j) {
      normalizer += std::log1p(problem.h0() / lambda_mat(i, j));
    }
  }
  return est.objective + normalizer;
}

Matrix ggm_convex_step(const GgmProblem& problem, const PrecisionEstimate& estimate,
                       const Box& box) {
  detail::require(box.dim() == problem.pair_count(), "box dimension must match pair count");
  const Eigen::Index m = problem.m();
  const double h0 = problem.h0();
  Matrix out = Matrix::Zero(m, m);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double t = estimate.theta(i, j);
      double lam;
      if (t == 0.0) {
        lam = box.hi(k);
      } else {
        // Minimizer of 2 lambda t^2 + log((h0 + lambda)/lambda): the s = 1
        // root with the doubled squared coefficient.
        lam = tikhonov_root(h0, 2.0 * t * t);
      }
      lam = box.clamp(lam, k);
      out(i, j) = lam;
      out(j, i) = lam;
      ++k;
    }
  }
  return out;
}

Vector GgmProblem::solve(const Lambda& lambda, const Vector* warm_start) const {
  const Matrix lam = unpack_pairs(lambda.weights());
  Matrix warm;
  const Matrix* warm_ptr = nullptr;
  if (warm_start && warm_start->size() == dim_theta()) {
    warm = Eigen::Map<const Matrix>(warm_start->data(), m(), m());
    warm_ptr = &warm;
  }
  const PrecisionEstimate est = solve_ggm(*this, lam, warm_ptr);
  return Eigen::Map<const Vector>(est.theta.data(), dim_theta());
}

double GgmProblem::loss(const Vector& theta) const {
  detail::require(theta.size() == dim_theta(), "theta dimension mismatch");
  const Matrix t = Eigen::Map<const Matrix>(theta.data(), m(), m());
  Eigen::LLT<Matrix> llt;
  double logdet = 0.0;
  if (!chol_logdet(t, &llt, &logdet)) {
    throw std::domain_error("ulnml: precision matrix is not positive definite");
  }
  const double nd = static_cast<double>(n_);
  return 0.5 * scatter_.cwiseProduct(t).sum() -
         0.5 * nd * (logdet + static_cast<double>(m()) * kLog2Pi);
}

Vector GgmProblem::penalty_features(const Vector& theta) const {
  detail::require(theta.size() == dim_theta(), "theta dimension mismatch");
  const Matrix t = Eigen::Map<const Matrix>(theta.data(), m(), m());
  // Both ordered copies of each tied pair: feature 2 Theta_ij^2.
  return 2.0 * pack_pairs(t).array().square().matrix();
}

UpperSmoothness GgmProblem::smoothness() const {
  return UpperSmoothness::isotropic(dim_theta(), h0_);
}

PenaltyKind GgmProblem::penalty_kind() const { return PenaltyKind::Tikhonov(2.0); }

double GgmProblem::log_normalizer(const Lambda& lambda) const {
  detail::require(lambda.dim() == pair_count(), "lambda dimension must match pair count");
  double sum = 0.0;
  for (Eigen::Index k = 0; k < lambda.dim(); ++k) {
    sum += std::log1p(h0_ / lambda[k]);  // both ordered pairs of the tie
  }
  return sum;
}

Lambda GgmProblem::convex_step(const Vector& theta, const Lambda& current) const {
  detail::require(theta.size() == dim_theta(), "theta dimension mismatch");
  PrecisionEstimate est;
  est.theta = Eigen::Map<const Matrix>(theta.data(), m(), m());
  const Matrix lam = ggm_convex_step(*this, est, current.box());
  return Lambda::project(pack_pairs(lam), current.box());
}

Matrix double_ring_precision(Eigen::Index m) {
  detail::require(m >= 5, "double ring requires m >= 5");
  Matrix theta = Matrix::Identity(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index lag : {Eigen::Index(1), Eigen::Index(2)}) {
      const Eigen::Index j = (i + lag) % m;
      theta(i, j) = 0.25;
      theta(j, i) = 0.25;
    }
  }
  return theta;
}

Matrix double_ring_sample(Eigen::Index m, Eigen::Index n, std::uint64_t seed) {
  detail::require(n >= 1, "sample count must be positive");
  const Matrix theta = double_ring_precision(m);
  Eigen::LLT<Matrix> llt(theta);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("ulnml: double-ring precision is not positive definite");
  }
  const Matrix sigma = llt.solve(Matrix::Identity(m, m));
  Eigen::LLT<Matrix> sig_llt(sigma);
  if (sig_llt.info() != Eigen::Success) {
    throw std::runtime_error("ulnml: double-ring covariance factorization failed");
  }
  const Matrix L = sig_llt.matrixL();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix X(n, m);
  Vector z(m);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) z[c] = normal(rng);
    X.row(r) = (L * z).transpose();
  }
  return X;
}

double kl_gaussian(const Matrix& theta_true, const Matrix& theta_hat) {
  detail::require(theta_true.rows() == theta_true.cols() &&
                      theta_hat.rows() == theta_hat.cols() &&
                      theta_true.rows() == theta_hat.rows(),
                  "precision matrices must be square with equal dimension");
  const Eigen::Index m = theta_true.rows();
  Eigen::LLT<Matrix> llt_true, llt_hat;
  double logdet_true = 0.0, logdet_hat = 0.0;
  if (!chol_logdet(theta_true, &llt_true, &logdet_true) ||
      !chol_logdet(theta_hat, &llt_hat, &logdet_hat)) {
    throw std::domain_error("ulnml: KL divergence needs positive definite precisions");
  }
  const Matrix sigma_true = llt_true.solve(Matrix::Identity(m, m));
  const double trace = theta_hat.cwiseProduct(sigma_true).sum();
  return 0.5 * (trace - static_cast<double>(m) + logdet_true - logdet_hat);
}

}  // namespace ulnml
