#include "ulnml/core.hpp"

#include <cmath>
#include <sstream>

#include "ulnml/convex_step.hpp"
#include "ulnml/normalizer.hpp"

namespace ulnml {

namespace detail {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument("ulnml: " + msg);
}

void require_finite(const Vector& v, const std::string& what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream oss;
      oss << "ulnml: non-finite entry in " << what << " at index " << i;
      throw std::invalid_argument(oss.str());
    }
  }
}

}  // namespace detail

Box::Box(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  detail::require(lo_.size() == hi_.size(), "box bounds must have equal length");
  detail::require(lo_.size() >= 1, "box must have at least one coordinate");
  for (Eigen::Index j = 0; j < lo_.size(); ++j) {
    detail::require(std::isfinite(lo_[j]) && std::isfinite(hi_[j]),
                    "box bounds must be finite");
    detail::require(lo_[j] > 0.0 && lo_[j] <= hi_[j], "box requires 0 < lo <= hi");
  }
}

Box Box::uniform(double lo, double hi, Eigen::Index d) {
  return Box(Vector::Constant(d, lo), Vector::Constant(d, hi));
}

double Box::clamp(double value, Eigen::Index j) const {
  return std::min(hi_[j], std::max(lo_[j], value));
}

Vector Box::geometric_midpoint() const {
  return (lo_.array() * hi_.array()).sqrt().matrix();
}

bool Box::contains(const Vector& w) const {
  if (w.size() != dim()) return false;
  for (Eigen::Index j = 0; j < dim(); ++j) {
    if (!(w[j] >= lo_[j] && w[j] <= hi_[j])) return false;
  }
  return true;
}

Lambda Lambda::project(const Vector& raw, Box box) {
  detail::require(raw.size() == box.dim(), "weight/box dimension mismatch");
  detail::require_finite(raw, "penalty weights");
  Vector w(raw.size());
  for (Eigen::Index j = 0; j < raw.size(); ++j) w[j] = box.clamp(raw[j], j);
  return Lambda(std::move(w), std::move(box));
}

Lambda Lambda::midpoint(Box box) {
  Vector mid = box.geometric_midpoint();
  return Lambda(std::move(mid), std::move(box));
}

Lambda project_box(const Vector& raw, const Box& box) { return Lambda::project(raw, box); }

UpperSmoothness UpperSmoothness::diagonal(Vector h, double c0) {
  detail::require(h.size() >= 1, "smoothness diagonal must be non-empty");
  detail::require(h.minCoeff() >= 0.0, "smoothness diagonal must be nonnegative");
  detail::require(c0 >= 0.0, "smoothness constant must be nonnegative");
  UpperSmoothness s;
  s.h_diag = std::move(h);
  s.c0 = c0;
  return s;
}

UpperSmoothness UpperSmoothness::isotropic(Eigen::Index p, double h, double c0) {
  return diagonal(Vector::Constant(p, h), c0);
}

PenaltyKind PenaltyKind::Tikhonov(double scale) {
  detail::require(scale > 0.0, "penalty scale must be positive");
  return PenaltyKind{Family::tikhonov, scale};
}

PenaltyKind PenaltyKind::Lasso() { return PenaltyKind{Family::lasso, 1.0}; }

double RermProblem::log_normalizer(const Lambda& lambda) const {
  const UpperSmoothness s = smoothness();
  detail::require(s.h_diag.size() == lambda.dim(),
                  "default normalizer needs smoothness aligned with lambda");
  const PenaltyKind kind = penalty_kind();
  if (kind.family == PenaltyKind::Family::tikhonov) {
    return log_normalizer_tikhonov(s.h_diag, lambda, kind.scale).value;
  }
  return log_normalizer_lasso(s.h_diag, lambda).value;
}

Lambda RermProblem::convex_step(const Vector& theta, const Lambda& current) const {
  const UpperSmoothness s = smoothness();
  detail::require(dim_theta() == dim_lambda() && s.h_diag.size() == dim_lambda(),
                  "default convex step needs theta aligned with lambda; override it");
  const PenaltyKind kind = penalty_kind();
  if (kind.family == PenaltyKind::Family::tikhonov) {
    return update_tikhonov(theta, s.h_diag, kind.scale, current.box());
  }
  return update_lasso(theta, s.h_diag, current.box());
}

double penalty_value(const RermProblem& problem, const Vector& theta, const Lambda& lambda) {
  return problem.penalty_features(theta).dot(lambda.weights());
}

const FitIteration& FitTrace::final() const {
  detail::require(!iterations.empty(), "trace has no iterations");
  return iterations.back();
}

Lambda FitTrace::final_lambda() const { return Lambda::project(final().lambda, box); }

}  // namespace ulnml
