#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ulnml/baselines.hpp"
#include "ulnml/convex_step.hpp"
#include "ulnml/data.hpp"
#include "ulnml/ggm.hpp"
#include "ulnml/mdlrs.hpp"
#include "ulnml/normalizer.hpp"
#include "ulnml/oracle.hpp"
#include "ulnml/ridge.hpp"

namespace py = pybind11;
using namespace ulnml;

namespace {

Box make_box(double lo, double hi, Eigen::Index d) { return Box::uniform(lo, hi, d); }

std::vector<Lambda> scalar_inits(const std::vector<double>& values, const Box& box) {
  std::vector<Lambda> inits;
  for (double v : values) {
    inits.push_back(Lambda::project(Vector::Constant(box.dim(), v), box));
  }
  if (inits.empty()) inits.push_back(Lambda::midpoint(box));
  return inits;
}

struct PyRidgeFit {
  Vector beta;
  double sigma2;
  Vector lambda;
  std::vector<double> ulnml_path;
  bool converged;
};

struct PyGgmFit {
  Matrix theta;
  Matrix lambda;
  std::vector<double> ulnml_path;
  bool converged;
};

std::vector<double> trace_path(const FitTrace& trace) {
  std::vector<double> path;
  path.reserve(trace.iterations.size());
  for (const auto& it : trace.iterations) path.push_back(it.ulnml);
  return path;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Penalty selection by minimizing an analytic upper bound of the "
            "luckiness normalized maximum likelihood code length";

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>())
      .def_readwrite("lo", &Interval::lo)
      .def_readwrite("hi", &Interval::hi);

  py::class_<Box>(m, "Box")
      .def(py::init(&make_box), py::arg("lo"), py::arg("hi"), py::arg("dim"))
      .def_property_readonly("lo", [](const Box& b) { return b.lo(); })
      .def_property_readonly("hi", [](const Box& b) { return b.hi(); })
      .def("geometric_midpoint", &Box::geometric_midpoint);

  py::class_<Lambda>(m, "Lambda")
      .def_static("project", [](const Vector& raw, const Box& box) {
        return Lambda::project(raw, box);
      })
      .def_property_readonly("weights", &Lambda::weights);

  m.def(
      "project_box",
      [](const Vector& raw, double lo, double hi) {
        return Lambda::project(raw, Box::uniform(lo, hi, raw.size())).weights();
      },
      py::arg("raw"), py::arg("lo"), py::arg("hi"),
      "Clamp raw weights into the per-coordinate box [lo, hi].");

  py::class_<NormalizerBound>(m, "NormalizerBound")
      .def_readonly("value", &NormalizerBound::value)
      .def_readonly("per_coord", &NormalizerBound::per_coord);

  m.def(
      "log_normalizer_tikhonov",
      [](const Vector& h, const Vector& lam, double scale) {
        return log_normalizer_tikhonov(
            h, Lambda::project(lam, Box::uniform(lam.minCoeff(), lam.maxCoeff(), lam.size())),
            scale);
      },
      py::arg("h_diag"), py::arg("lam"), py::arg("scale") = 1.0);
  m.def("log_normalizer_lasso", [](const Vector& h, const Vector& lam) {
    return log_normalizer_lasso(
        h, Lambda::project(lam, Box::uniform(lam.minCoeff(), lam.maxCoeff(), lam.size())));
  });

  m.def(
      "update_tikhonov",
      [](const Vector& theta, const Vector& h, double scale, double lo, double hi) {
        return update_tikhonov(theta, h, scale, Box::uniform(lo, hi, theta.size())).weights();
      },
      py::arg("theta"), py::arg("h_diag"), py::arg("scale") = 1.0, py::arg("lo") = 1e-6,
      py::arg("hi") = 1e6);
  m.def(
      "update_lasso",
      [](const Vector& theta, const Vector& h, double lo, double hi) {
        return update_lasso(theta, h, Box::uniform(lo, hi, theta.size())).weights();
      },
      py::arg("theta"), py::arg("h_diag"), py::arg("lo") = 1e-6, py::arg("hi") = 1e6);

  // ---- ridge ----
  py::class_<PyRidgeFit>(m, "RidgeFit")
      .def_readonly("beta", &PyRidgeFit::beta)
      .def_readonly("sigma2", &PyRidgeFit::sigma2)
      .def_readonly("lam", &PyRidgeFit::lambda)
      .def_readonly("ulnml_path", &PyRidgeFit::ulnml_path)
      .def_readonly("converged", &PyRidgeFit::converged);

  m.def(
      "fit_ridge",
      [](const Matrix& X, const Vector& y, double box_lo, double box_hi, double sigma_lo,
         double sigma_hi, bool full_normalizer, const std::vector<double>& multistart,
         int max_iter, double rel_tol) {
        const RidgeProblem problem(X, y, Interval{sigma_lo, sigma_hi},
                                   full_normalizer ? RidgeProblem::NormalizerMode::full
                                                   : RidgeProblem::NormalizerMode::diagonal);
        const Box box = Box::uniform(box_lo, box_hi, X.cols());
        const FitTrace trace =
            fit_multistart(problem, scalar_inits(multistart, box), StopRule(max_iter, rel_tol));
        const RidgeSolution sol = problem.unpack(trace.final().theta);
        return PyRidgeFit{sol.beta, sol.sigma2, trace.final().lambda, trace_path(trace),
                          trace.converged};
      },
      py::arg("X"), py::arg("y"), py::arg("box_lo") = 1e-6, py::arg("box_hi") = 1e6,
      py::arg("sigma_lo") = 1e-2, py::arg("sigma_hi") = 1e2, py::arg("full_normalizer") = true,
      py::arg("multistart") = std::vector<double>{1e-2, 1.0, 1e2, 1e4}, py::arg("max_iter") = 200,
      py::arg("rel_tol") = 1e-8,
      "Alternating penalty-weight selection for penalized Gaussian regression.");

  m.def(
      "solve_ridge",
      [](const Matrix& X, const Vector& y, const Vector& lam, double sigma_lo, double sigma_hi) {
        const RidgeProblem problem(X, y, Interval{sigma_lo, sigma_hi});
        const RidgeSolution s = solve_ridge(
            problem,
            Lambda::project(lam, Box::uniform(lam.minCoeff(), lam.maxCoeff(), lam.size())));
        return py::make_tuple(s.beta, s.sigma2, s.rerm_objective);
      },
      py::arg("X"), py::arg("y"), py::arg("lam"), py::arg("sigma_lo") = 1e-2,
      py::arg("sigma_hi") = 1e2);

  m.def(
      "ridge_ulnml",
      [](const Matrix& X, const Vector& y, const Vector& lam, double sigma_lo, double sigma_hi) {
        const RidgeProblem problem(X, y, Interval{sigma_lo, sigma_hi});
        return ridge_ulnml(problem, Lambda::project(lam, Box::uniform(lam.minCoeff(),
                                                                      lam.maxCoeff(),
                                                                      lam.size())));
      },
      py::arg("X"), py::arg("y"), py::arg("lam"), py::arg("sigma_lo") = 1e-2,
      py::arg("sigma_hi") = 1e2);

  m.def("predict", &predict, py::arg("beta"), py::arg("X_new"));
  m.def("rmse", &rmse, py::arg("y_hat"), py::arg("y_true"));

  // ---- graphical model ----
  py::class_<PyGgmFit>(m, "GgmFit")
      .def_readonly("theta", &PyGgmFit::theta)
      .def_readonly("lam", &PyGgmFit::lambda)
      .def_readonly("ulnml_path", &PyGgmFit::ulnml_path)
      .def_readonly("converged", &PyGgmFit::converged);

  m.def(
      "fit_ggm",
      [](const Matrix& X, double radius, double box_lo, double box_hi, int max_iter,
         double rel_tol) {
        const Matrix S = X.transpose() * X;
        const GgmProblem problem(S, X.rows(), radius);
        const Box box = Box::uniform(box_lo, box_hi, problem.pair_count());
        const FitTrace trace = fit(problem, Lambda::midpoint(box), StopRule(max_iter, rel_tol));
        const Matrix theta = Eigen::Map<const Matrix>(trace.final().theta.data(), problem.m(),
                                                      problem.m());
        return PyGgmFit{theta, problem.unpack_pairs(trace.final().lambda), trace_path(trace),
                        trace.converged};
      },
      py::arg("X"), py::arg("radius") = 0.0, py::arg("box_lo") = 1e-6, py::arg("box_hi") = 1e10,
      py::arg("max_iter") = 200, py::arg("rel_tol") = 1e-8,
      "Alternating penalty-weight selection for Gaussian precision estimation.");

  m.def(
      "solve_ggm",
      [](const Matrix& X, const Matrix& lambda_mat, double radius) {
        const Matrix S = X.transpose() * X;
        const GgmProblem problem(S, X.rows(), radius);
        const PrecisionEstimate est = solve_ggm(problem, lambda_mat);
        return py::make_tuple(est.theta, est.objective, est.converged);
      },
      py::arg("X"), py::arg("lambda_mat"), py::arg("radius") = 0.0);

  m.def("double_ring_precision", &double_ring_precision, py::arg("m"));
  m.def("double_ring_sample", &double_ring_sample, py::arg("m"), py::arg("n"), py::arg("seed"));
  m.def("kl_gaussian", &kl_gaussian, py::arg("theta_true"), py::arg("theta_hat"));

  // ---- baselines, data, oracle ----
  m.def(
      "grid_points",
      [](double lo, double hi, int count) { return grid_points({lo, hi, count}); },
      py::arg("lo"), py::arg("hi"), py::arg("count"));

  m.def(
      "gen_synth_regression",
      [](int n, int informative, int irrelevant, bool correlated, double noise_sd,
         std::uint64_t seed) {
        const auto ds =
            gen_synth_regression(n, informative, irrelevant, correlated, noise_sd, seed);
        return py::make_tuple(ds.X, ds.y);
      },
      py::arg("n"), py::arg("informative") = 5, py::arg("irrelevant") = 45,
      py::arg("correlated") = false, py::arg("noise_sd") = 1.0, py::arg("seed") = 0);

  m.def(
      "load_csv",
      [](const std::string& path, const std::string& target, bool standardize) {
        const auto ds = load_csv(path, target, standardize);
        return py::make_tuple(ds.X, ds.y);
      },
      py::arg("path"), py::arg("target"), py::arg("standardize") = true);

  m.def(
      "z_quadrature",
      [](double lam, double B) {
        const auto model = B > 0.0 ? Scalar1DModel::with_domain(B) : Scalar1DModel::unbounded();
        return z_quadrature(model, lam);
      },
      py::arg("lam"), py::arg("B") = 0.0,
      "Exact normalizing factor of the one-dimensional location model "
      "(B <= 0 selects the unbounded parameter domain).");
  m.def(
      "lnml_quadrature",
      [](double x, double lam, double B) {
        const auto model = B > 0.0 ? Scalar1DModel::with_domain(B) : Scalar1DModel::unbounded();
        return lnml_quadrature(model, x, lam);
      },
      py::arg("x"), py::arg("lam"), py::arg("B") = 0.0);
  m.def("model_log_normalizer", &model_log_normalizer, py::arg("lam"));
  m.def(
      "gap_check",
      [](const std::vector<double>& lambdas, double B) {
        const auto model = B > 0.0 ? Scalar1DModel::with_domain(B) : Scalar1DModel::unbounded();
        const auto report = gap_check(model, lambdas);
        py::dict out;
        out["lambdas"] = report.lambdas;
        out["gaps"] = report.gaps;
        out["bound"] = report.bound;
        out["pass"] = report.pass;
        return out;
      },
      py::arg("lambdas"), py::arg("B") = 0.0);
}
