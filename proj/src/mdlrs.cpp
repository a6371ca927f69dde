#include "ulnml/mdlrs.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ulnml/normalizer.hpp"

namespace ulnml {

StopRule::StopRule(int max_iter_, double rel_tol_) : max_iter(max_iter_), rel_tol(rel_tol_) {
  detail::require(max_iter >= 1, "max_iter must be at least 1");
  detail::require(rel_tol > 0.0 && rel_tol < 1.0, "rel_tol must lie in (0, 1)");
}

FitTrace fit(const RermProblem& problem, const Lambda& lambda0, const StopRule& stop) {
  detail::require(lambda0.dim() == problem.dim_lambda(), "lambda0 dimension mismatch");
  detail::require(stop.max_iter >= 1 && stop.rel_tol > 0.0 && stop.rel_tol < 1.0,
                  "invalid stop rule");

  FitTrace trace{{}, lambda0.box(), false, StopReason::max_iter};
  Lambda lambda = lambda0;
  Vector theta;
  double prev = std::numeric_limits<double>::quiet_NaN();

  for (int t = 1; t <= stop.max_iter; ++t) {
    try {
      const Vector* warm = theta.size() > 0 ? &theta : nullptr;
      theta = problem.solve(lambda, warm);
      const double rerm = problem.loss(theta) + penalty_value(problem, theta, lambda);
      lambda = problem.convex_step(theta, lambda);
      const double u = ulnml_objective(problem, theta, lambda);
      trace.iterations.push_back({lambda.weights(), theta, u, rerm});

      if (t > 1 && std::abs(u - prev) / (1.0 + std::abs(prev)) < stop.rel_tol) {
        trace.converged = true;
        trace.stop_reason = StopReason::tolerance;
        return trace;
      }
      prev = u;
    } catch (const std::exception& e) {
      std::ostringstream oss;
      oss << "ulnml: fit failed at iteration " << t << ": " << e.what();
      throw std::runtime_error(oss.str());
    }
  }
  trace.stop_reason = StopReason::max_iter;
  return trace;
}

FitTrace fit_multistart(const RermProblem& problem, const std::vector<Lambda>& inits,
                        const StopRule& stop) {
  detail::require(!inits.empty(), "multistart requires at least one init");
  std::vector<FitTrace> traces;
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < inits.size(); ++i) {
    try {
      traces.push_back(fit(problem, inits[i], stop));
    } catch (const std::exception& e) {
      std::ostringstream oss;
      oss << "init " << i << ": " << e.what();
      failures.push_back(oss.str());
    }
  }
  if (traces.empty()) {
    std::ostringstream oss;
    oss << "ulnml: every multistart run failed:";
    for (const auto& f : failures) oss << "\n  " << f;
    throw std::runtime_error(oss.str());
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < traces.size(); ++i) {
    if (traces[i].final().ulnml < traces[best].final().ulnml) best = i;
  }
  return traces[best];
}

}  // namespace ulnml
