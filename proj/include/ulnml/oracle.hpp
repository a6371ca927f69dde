#ifndef ULNML_ORACLE_HPP
#define ULNML_ORACLE_HPP

#include <functional>
#include <vector>

#include "ulnml/core.hpp"

namespace ulnml {

/// Desk-scale ground-truth model: one Gaussian-location observation,
///   f_x(theta) = (x - theta)^2 / 2 + log(2 pi)/2,
/// quadratic penalty lambda theta^2 / 2, parameter domain [-B, B] or the
/// whole line. Everything about it is computable to certified digits by
/// quadrature, which makes it the referee for the analytic bounds.
struct Scalar1DModel {
  bool bounded = false;
  double B = 0.0;       // half-width of the parameter domain when bounded
  double x_max = 0.0;   // optional data-domain truncation override (0 = auto)

  static Scalar1DModel unbounded();
  static Scalar1DModel with_domain(double B);

  /// Inner minimizer clamp(x / (1 + lambda), [-B, B]).
  double theta_hat(double x, double lambda) const;
  /// min over theta of f_x + lambda theta^2 / 2.
  double min_objective(double x, double lambda) const;
};

/// Adaptive composite quadrature: doubles the panel count until two
/// successive refinements agree to 1e-10 relative; throws after 30 levels.
double integrate(const std::function<double(double)>& f, double lo, double hi);

/// Exact normalizing factor Z(lambda) = integral over x of
/// exp{-min_theta [f_x(theta) + lambda theta^2/2]}, by quadrature with the
/// inner minimization in closed form. Relative error below 1e-9.
double z_quadrature(const Scalar1DModel& model, double lambda);

/// Exact code length min_theta [f_x + g] + log Z(lambda).
double lnml_quadrature(const Scalar1DModel& model, double x, double lambda);

/// log of the analytic normalizer bound for this model: (1/2) log((1+lambda)/lambda).
double model_log_normalizer(double lambda);

/// Quadrature evaluation of T(psi): mass of the data region whose inner
/// minimizer at the smallest tested weight is interior to the domain,
/// weighted by the model density at psi.
double t_quadrature(const Scalar1DModel& model, double psi, double lambda_star);

/// Analytic lower bound on Z(lambda) with strong convexity 1 + lambda,
/// window V = [-(B+u), B+u] (the whole real line when u is infinite):
///   sqrt(1+lambda)/sqrt(2 pi) * inf_{psi in V} T(psi) * int_V e^{-lambda t^2/2} dt.
double z_lower_bound(const Scalar1DModel& model, double lambda, double lambda_star,
                     double neighbor_halfwidth);

struct GapReport {
  std::vector<double> lambdas;
  std::vector<double> gaps;       // measured log Zbar - log Z per lambda
  double bound = 0.0;             // single lambda-uniform constant
  double neighbor_halfwidth = 0.0;
  bool pass = false;
};

/// Measure the bound-vs-exact gap over a weight grid and compare against
/// the uniform analytic constant
///   -log R(1; U) - log inf_{psi in Omega+U} T(psi),
/// with U = [-u, u] chosen to minimize the constant (U = R for the
/// unbounded model, where the constant is 0). Pass iff every gap is below
/// the constant plus 1e-8.
GapReport gap_check(const Scalar1DModel& model, const std::vector<double>& lambdas);

/// Golden-section minimizer of a unimodal function on [lo, hi] to 1e-10
/// absolute; monotone objectives resolve to the cheaper endpoint.
double minimize_1d(const std::function<double(double)>& objective, double lo, double hi);

}  // namespace ulnml

#endif  // ULNML_ORACLE_HPP
