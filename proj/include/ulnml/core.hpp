#ifndef ULNML_CORE_HPP
#define ULNML_CORE_HPP

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ulnml {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Per-coordinate box domain for penalty weights, 0 < lo_j <= hi_j < inf.
class Box {
 public:
  Box(Vector lo, Vector hi);

  /// Same interval [lo, hi] replicated over d coordinates.
  static Box uniform(double lo, double hi, Eigen::Index d);

  Eigen::Index dim() const { return lo_.size(); }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  double lo(Eigen::Index j) const { return lo_[j]; }
  double hi(Eigen::Index j) const { return hi_[j]; }

  double clamp(double value, Eigen::Index j) const;

  /// Per-coordinate geometric midpoint sqrt(lo_j * hi_j).
  Vector geometric_midpoint() const;

  bool contains(const Vector& w) const;

 private:
  Vector lo_, hi_;
};

/// Positive penalty-weight vector tied to its box domain. Instances are
/// immutable; every construction path projects into the box, so the
/// in-box invariant is structural.
class Lambda {
 public:
  /// Clamp each raw weight into its box interval. Non-finite input throws.
  static Lambda project(const Vector& raw, Box box);

  /// Weights at the geometric midpoint of the box.
  static Lambda midpoint(Box box);

  Eigen::Index dim() const { return weights_.size(); }
  const Vector& weights() const { return weights_; }
  double operator[](Eigen::Index j) const { return weights_[j]; }
  const Box& box() const { return box_; }

  /// Project a new raw vector into this lambda's box.
  Lambda with_weights(const Vector& raw) const { return project(raw, box_); }

 private:
  Lambda(Vector w, Box box) : weights_(std::move(w)), box_(std::move(box)) {}
  Vector weights_;
  Box box_;
};

/// Clamp raw weights into the box; the operation behind every lambda update.
Lambda project_box(const Vector& raw, const Box& box);

enum class ResidualKind {
  zero,              // r(t) = 0; all in-scope models
  bounded_residual,  // declared for completeness, no in-scope model uses it
};

/// Parameters of the one-sided quadratic growth bound on the loss:
/// diagonal (or isotropic) matrix, additive constant, residual descriptor.
struct UpperSmoothness {
  Vector h_diag;
  double c0 = 0.0;
  ResidualKind r_kind = ResidualKind::zero;

  static UpperSmoothness diagonal(Vector h, double c0 = 0.0);
  static UpperSmoothness isotropic(Eigen::Index p, double h, double c0 = 0.0);
};

/// Shape of the linear penalty family.
///   tikhonov: g(theta, lambda) = (scale/2) * sum_j lambda_j theta_j^2
///   lasso:    g(theta, lambda) = sum_j lambda_j |theta_j|
struct PenaltyKind {
  enum class Family { tikhonov, lasso };

  Family family = Family::tikhonov;
  double scale = 1.0;

  static PenaltyKind Tikhonov(double scale = 1.0);
  static PenaltyKind Lasso();
};

/// Contract every penalized-estimation problem fulfils so the alternating
/// minimizer can drive it: an inner solver for fixed weights, loss and
/// penalty-feature evaluation, and smoothness data for the normalizer bound.
///
/// log_normalizer and convex_step have generic closed-form defaults driven
/// by penalty_kind()/smoothness(); models with an exact model-specific
/// normalizer (ridge log-det, graphical pairs) override both together so
/// the objective evaluated by the loop and the lambda update stay aligned.
class RermProblem {
 public:
  virtual ~RermProblem() = default;

  virtual Eigen::Index dim_theta() const = 0;
  virtual Eigen::Index dim_lambda() const = 0;

  /// Minimize loss(theta) + penalty(theta, lambda) over the feasible set.
  /// warm_start, when non-null, is a feasible hint that implementations
  /// may use or ignore.
  virtual Vector solve(const Lambda& lambda, const Vector* warm_start = nullptr) const = 0;

  virtual double loss(const Vector& theta) const = 0;

  /// Featurization g_1(theta), ..., g_d(theta) of the linear penalty
  /// g(theta, lambda) = sum_j lambda_j g_j(theta). Entries are nonnegative
  /// for quadratic and absolute-value penalties.
  virtual Vector penalty_features(const Vector& theta) const = 0;

  virtual UpperSmoothness smoothness() const = 0;
  virtual PenaltyKind penalty_kind() const = 0;

  /// log of the normalizer upper bound, lambda-independent constants dropped.
  virtual double log_normalizer(const Lambda& lambda) const;

  /// argmin over lambda of penalty(theta, lambda) + log_normalizer(lambda),
  /// projected into the box. `current` carries the box and the warm iterate.
  virtual Lambda convex_step(const Vector& theta, const Lambda& current) const;
};

/// penalty value sum_j lambda_j g_j(theta)
double penalty_value(const RermProblem& problem, const Vector& theta, const Lambda& lambda);

enum class StopReason { tolerance, max_iter };

struct FitIteration {
  Vector lambda;
  Vector theta;
  double ulnml = 0.0;
  double rerm_objective = 0.0;
};

/// Per-iteration record of the alternating fit. The ulnml sequence is
/// non-increasing up to 1e-9 relative slack.
struct FitTrace {
  std::vector<FitIteration> iterations;
  Box box;
  bool converged = false;
  StopReason stop_reason = StopReason::max_iter;

  const FitIteration& final() const;
  Lambda final_lambda() const;
};

namespace detail {
void require(bool cond, const std::string& msg);
void require_finite(const Vector& v, const std::string& what);
}  // namespace detail

}  // namespace ulnml

#endif  // ULNML_CORE_HPP
