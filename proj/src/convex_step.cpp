#include "ulnml/convex_step.hpp"

#include <cmath>

namespace ulnml {

double tikhonov_root(double h, double theta_sq) {
  // (h/2)[sqrt(1 + 4/(t h)) - 1] rewritten as 2 / (t [sqrt(1 + 4/(t h)) + 1])
  // to avoid the sqrt(1+eps)-1 cancellation when 4/(t h) is small.
  const double eps = 4.0 / (theta_sq * h);
  return 2.0 / (theta_sq * (std::sqrt(1.0 + eps) + 1.0));
}

Lambda update_tikhonov(const Vector& theta, const Vector& h_diag, double scale, const Box& box) {
  detail::require(theta.size() == h_diag.size() && theta.size() == box.dim(),
                  "update_tikhonov dimension mismatch");
  detail::require(scale > 0.0, "penalty scale must be positive");
  detail::require_finite(theta, "theta");
  Vector out(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const double t = theta[j] * theta[j];
    double lam;
    if (t == 0.0) {
      lam = box.hi(j);  // penalty feature vanishes, minimizer diverges upward
    } else if (h_diag[j] <= 0.0) {
      lam = box.lo(j);  // bound term vanishes, only the penalty remains
    } else {
      lam = tikhonov_root(h_diag[j], t) / scale;
    }
    out[j] = box.clamp(lam, j);
  }
  return Lambda::project(out, box);
}

Lambda update_lasso(const Vector& theta, const Vector& h_diag, const Box& box) {
  detail::require(theta.size() == h_diag.size() && theta.size() == box.dim(),
                  "update_lasso dimension mismatch");
  detail::require_finite(theta, "theta");
  Vector out(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const double a = std::abs(theta[j]);
    const double h = h_diag[j];
    double lam;
    if (a == 0.0) {
      lam = box.hi(j);
    } else if (h <= 0.0) {
      lam = box.lo(j);
    } else {
      // Real root of lambda^3 + h lambda - h/|theta| = 0 (Cardano). The
      // conjugate cube-root pair is folded into u - (h/3)/u, which is exact
      // and avoids the alpha - sqrt(disc) cancellation.
      const double alpha = h / (2.0 * a);
      const double disc = alpha * alpha + std::pow(h / 3.0, 3);
      const double u = std::cbrt(alpha + std::sqrt(disc));
      lam = u - h / (3.0 * u);
    }
    out[j] = box.clamp(lam, j);
  }
  return Lambda::project(out, box);
}

Lambda update_numeric(const Vector& penalty_features, const BoundDerivative& bound_derivative,
                      const Box& box) {
  detail::require(penalty_features.size() == box.dim(), "update_numeric dimension mismatch");
  detail::require_finite(penalty_features, "penalty features");
  Vector out(box.dim());
  for (Eigen::Index j = 0; j < box.dim(); ++j) {
    const double g = penalty_features[j];
    const double lo = box.lo(j), hi = box.hi(j);
    const auto deriv = [&](double lam) { return g + bound_derivative(j, lam); };
    const double dlo = deriv(lo), dhi = deriv(hi);
    if (!std::isfinite(dlo) || !std::isfinite(dhi)) {
      throw std::runtime_error("ulnml: non-finite derivative at box endpoint");
    }
    if (dlo >= 0.0) {
      out[j] = lo;  // increasing on the whole interval
    } else if (dhi <= 0.0) {
      out[j] = hi;  // decreasing on the whole interval
    } else {
      double a = lo, b = hi;
      for (int it = 0; it < 200 && (b - a) > 1e-14 + 1e-13 * a; ++it) {
        const double mid = 0.5 * (a + b);
        (deriv(mid) >= 0.0 ? b : a) = mid;
      }
      out[j] = 0.5 * (a + b);
    }
  }
  return Lambda::project(out, box);
}

}  // namespace ulnml
