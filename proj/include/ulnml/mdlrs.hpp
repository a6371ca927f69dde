#ifndef ULNML_MDLRS_HPP
#define ULNML_MDLRS_HPP

#include <vector>

#include "ulnml/core.hpp"

namespace ulnml {

/// Stopping rule for the alternating loop: relative objective decrease
/// below rel_tol, or max_iter iterations.
struct StopRule {
  int max_iter = 200;
  double rel_tol = 1e-8;

  StopRule() = default;
  StopRule(int max_iter_, double rel_tol_);
};

/// Alternating minimization of loss + penalty + log normalizer bound:
/// solve the penalized problem at fixed weights, then the closed convex
/// weight update at fixed parameters. The recorded objective sequence is
/// non-increasing; stops when the relative decrease
/// |u_t - u_{t-1}| / (1 + |u_{t-1}|) drops below stop.rel_tol.
FitTrace fit(const RermProblem& problem, const Lambda& lambda0, const StopRule& stop = {});

/// Run fit from every initial weight vector and keep the trace with the
/// lowest final objective. Throws if inits is empty or every run fails.
FitTrace fit_multistart(const RermProblem& problem, const std::vector<Lambda>& inits,
                        const StopRule& stop = {});

}  // namespace ulnml

#endif  // ULNML_MDLRS_HPP
