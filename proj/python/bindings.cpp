#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eigentrilat/baselines.hpp"
#include "eigentrilat/ingest.hpp"
#include "eigentrilat/solver.hpp"
#include "eigentrilat/weights.hpp"

namespace py = pybind11;
namespace et = eigentrilat;

namespace {

// Python passes senders row-per-point, (m, dim); the library stores them
// column-per-point.
et::TrilaterationProblem make_problem(const Eigen::MatrixXd& senders,
                                      const Eigen::VectorXd& distances,
                                      const py::object& weights) {
  et::TrilaterationProblem p;
  p.dim = static_cast<int>(senders.cols());
  p.senders = senders.transpose();
  p.distances = distances;
  if (weights.is_none()) {
    p.weights = et::WeightMatrix::Unit(static_cast<int>(distances.size()));
  } else {
    const py::array arr = py::array::ensure(weights);
    if (arr.ndim() == 1) {
      p.weights = et::WeightMatrix::Diagonal(arr.cast<Eigen::VectorXd>());
    } else {
      p.weights = et::WeightMatrix::Full(arr.cast<Eigen::MatrixXd>());
    }
  }
  return p;
}

py::dict solution_dict(const et::SolutionSet& s) {
  py::dict d;
  switch (s.kind) {
    case et::SolutionKind::Unique:
      d["kind"] = "unique";
      break;
    case et::SolutionKind::Pair:
      d["kind"] = "pair";
      break;
    case et::SolutionKind::Sphere:
      d["kind"] = "sphere";
      break;
    case et::SolutionKind::IllDefined:
      d["kind"] = "ill_defined";
      break;
  }
  py::list pts;
  for (const et::Vec& x : s.points) pts.append(py::cast(x));
  d["points"] = pts;
  d["lambda"] = s.lambda;
  d["cost"] = s.cost;
  if (s.sphere) {
    py::dict sp;
    sp["center"] = py::cast(s.sphere->center);
    sp["radius"] = s.sphere->radius;
    sp["normal_space"] = py::cast(s.sphere->normal_space);
    d["sphere"] = sp;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Globally optimal trilateration via small eigenvalue problems";

  py::register_exception<et::Error>(m, "TrilaterationError");

  m.def(
      "solve",
      [](const Eigen::MatrixXd& senders, const Eigen::VectorXd& distances,
         const py::object& weights, double rank_tol) {
        et::SolveOptions opts;
        opts.rank_tol = rank_tol;
        return solution_dict(et::solve(make_problem(senders, distances,
                                                    weights),
                                       opts));
      },
      py::arg("senders"), py::arg("distances"), py::arg("weights") = py::none(),
      py::arg("rank_tol") = 1e-8,
      "Global minimizer set of the weighted squared-distance cost.\n"
      "senders is (m, dim) row per point; weights is None, a diagonal\n"
      "vector, or a full symmetric matrix.");

  m.def(
      "solve_simple",
      [](const Eigen::MatrixXd& senders, const Eigen::VectorXd& distances,
         const py::object& weights, double rank_tol) {
        et::SolveOptions opts;
        opts.rank_tol = rank_tol;
        return solution_dict(et::solve_simple(
            make_problem(senders, distances, weights), opts));
      },
      py::arg("senders"), py::arg("distances"), py::arg("weights") = py::none(),
      py::arg("rank_tol") = 1e-8,
      "Plain variant: rightmost eigenvalue plus one linear solve. Raises\n"
      "on near-singular shifts where solve() still classifies.");

  m.def(
      "solve_linear",
      [](const Eigen::MatrixXd& senders, const Eigen::VectorXd& distances) {
        return et::solve_linear(
            make_problem(senders, distances, py::none()));
      },
      py::arg("senders"), py::arg("distances"),
      "Classical linearized least squares baseline; needs m >= dim + 1.");

  m.def(
      "refine_ml",
      [](const Eigen::MatrixXd& senders, const Eigen::VectorXd& distances,
         const Eigen::VectorXd& x0, const py::object& sigma) {
        et::Vec sig;
        if (!sigma.is_none()) sig = sigma.cast<Eigen::VectorXd>();
        return et::refine_ml(make_problem(senders, distances, py::none()), x0,
                             sig);
      },
      py::arg("senders"), py::arg("distances"), py::arg("x0"),
      py::arg("sigma") = py::none(),
      "Damped Gauss-Newton polish of the range residual cost from x0.");

  m.def(
      "cost",
      [](const Eigen::VectorXd& x, const Eigen::MatrixXd& senders,
         const Eigen::VectorXd& distances, const py::object& weights) {
        return et::cost_h(x, make_problem(senders, distances, weights));
      },
      py::arg("x"), py::arg("senders"), py::arg("distances"),
      py::arg("weights") = py::none(),
      "Quartic weighted squared-distance cost at x.");

  m.def(
      "gradient",
      [](const Eigen::VectorXd& x, const Eigen::MatrixXd& senders,
         const Eigen::VectorXd& distances, const py::object& weights) {
        return et::gradient_h(x, make_problem(senders, distances, weights));
      },
      py::arg("x"), py::arg("senders"), py::arg("distances"),
      py::arg("weights") = py::none(), "Gradient of the cost at x.");

  m.def(
      "weights_toa",
      [](const Eigen::VectorXd& d, const Eigen::VectorXd& sigma) {
        return et::weights_toa(d, sigma).diag();
      },
      py::arg("distances"), py::arg("sigma"),
      "Diagonal TOA/RTT weights 1 / (4 sigma_j^2 d_j^2).");

  m.def(
      "weights_rss",
      [](const Eigen::VectorXd& d2, const Eigen::VectorXd& eta,
         double sigma_rss) {
        return et::weights_rss(d2, eta, sigma_rss).diag();
      },
      py::arg("d_squared"), py::arg("eta"), py::arg("sigma_rss"),
      "Diagonal RSS weights (5 eta_j / (sigma_rss d_j^2 ln 10))^2.");

  m.def("rss_to_distance_squared", &et::rss_to_distance_squared,
        py::arg("rss_dbm"), py::arg("c0"), py::arg("eta"),
        "Log-distance path loss inversion 10^((c0 - C) / (5 eta)).");

  m.def(
      "calibrate_pathloss",
      [](const std::vector<std::pair<double, double>>& records) {
        const et::PathLossFit fit = et::calibrate_pathloss(records);
        py::dict d;
        d["c0"] = fit.c0;
        d["eta"] = fit.eta;
        return d;
      },
      py::arg("records"),
      "Fit (c0, eta) from (distance, rss_dbm) pairs by least squares.");
}
