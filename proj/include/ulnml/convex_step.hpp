#ifndef ULNML_CONVEX_STEP_HPP
#define ULNML_CONVEX_STEP_HPP

#include <functional>

#include "ulnml/core.hpp"

namespace ulnml {

/// Closed-form minimizer of the per-coordinate Tikhonov objective
///   (s/2) lambda theta^2 + (1/2) log((h + s lambda) / (s lambda)),
/// projected into the box. theta_j = 0 maps to the upper corner, h_j = 0 to
/// the lower corner (pointwise limits of the closed form).
Lambda update_tikhonov(const Vector& theta, const Vector& h_diag, double scale, const Box& box);

/// Unprojected scalar root of the s = 1 Tikhonov objective
///   lambda t/2 + (1/2) log((h + lambda)/lambda)  with t = theta^2,
/// i.e. (h/2) [sqrt(1 + 4/(t h)) - 1], evaluated in cancellation-free form.
/// Shared by the general-scale update and the model-specific steps.
double tikhonov_root(double h, double theta_sq);

/// Closed-form minimizer of the per-coordinate lasso objective
///   lambda |theta| + (1/2) log((h + lambda^2) / lambda^2),
/// projected into the box. The stationary condition is the depressed cubic
///   lambda^3 + h lambda - h/|theta| = 0,
/// solved by the real Cardano root.
Lambda update_lasso(const Vector& theta, const Vector& h_diag, const Box& box);

/// Per-coordinate derivative of the normalizer bound at (j, lambda).
using BoundDerivative = std::function<double(Eigen::Index j, double lambda)>;

/// Generic fallback: per-coordinate bisection on the sign of
///   d/dlambda [lambda g_j + bound_j(lambda)] = g_j + bound_derivative(j, lambda)
/// for convex differentiable per-coordinate objectives. Resolves the root
/// well below the 1e-10 (hi - lo) contract so closed forms can be validated
/// against it at 1e-8 absolute.
Lambda update_numeric(const Vector& penalty_features, const BoundDerivative& bound_derivative,
                      const Box& box);

}  // namespace ulnml

#endif  // ULNML_CONVEX_STEP_HPP
