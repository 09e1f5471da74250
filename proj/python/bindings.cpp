#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "arm/affinity.hpp"
#include "arm/evaluation.hpp"
#include "arm/matrix_io.hpp"
#include "arm/pipeline.hpp"
#include "arm/prox.hpp"
#include "arm/solver.hpp"
#include "arm/spectral.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using IntArray = py::array_t<long long, py::array::c_style | py::array::forcecast>;

arm::ClusterLabels to_labels(const IntArray& a) {
  if (a.ndim() != 1) throw std::invalid_argument("labels must be a 1-d integer array");
  std::vector<long long> raw(a.data(), a.data() + a.size());
  return arm::ClusterLabels::from_raw(raw);
}

IntArray from_labels(const arm::ClusterLabels& labels) {
  IntArray out(static_cast<py::ssize_t>(labels.size()));
  auto view = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < labels.size(); ++i) view(static_cast<py::ssize_t>(i)) = labels.ids[i];
  return out;
}

std::vector<py::ssize_t> indices(const std::vector<arm::Index>& v) { return {v.begin(), v.end()}; }

// Trace as a dict of equal-length numpy columns.
py::dict trace_columns(const std::vector<arm::IterationRecord>& trace) {
  const auto n = static_cast<py::ssize_t>(trace.size());
  py::array_t<long long> iter(n), dc(n);
  py::array_t<double> obj(n), r1(n), r2(n), mu(n), atan_rank(n), nuc(n), y1(n), y2(n);
  for (py::ssize_t i = 0; i < n; ++i) {
    const auto& r = trace[static_cast<std::size_t>(i)];
    iter.mutable_at(i) = r.iter;
    dc.mutable_at(i) = r.dc_iters;
    obj.mutable_at(i) = r.objective;
    r1.mutable_at(i) = r.r1;
    r2.mutable_at(i) = r.r2;
    mu.mutable_at(i) = r.mu;
    atan_rank.mutable_at(i) = r.arctan_rank;
    nuc.mutable_at(i) = r.nuclear_norm;
    y1.mutable_at(i) = r.y1_max;
    y2.mutable_at(i) = r.y2_max;
  }
  return py::dict("iter"_a = iter, "objective"_a = obj, "r1"_a = r1, "r2"_a = r2, "mu"_a = mu, "dc_iters"_a = dc,
                  "arctan_rank"_a = atan_rank, "nuclear_norm"_a = nuc, "y1_max"_a = y1, "y2_max"_a = y2);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Arctangent rank minimization for robust subspace clustering";

  py::register_exception<arm::FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<arm::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::enum_<arm::ErrorModel>(m, "ErrorModel")
      .value("FRO", arm::ErrorModel::Frobenius)
      .value("L1", arm::ErrorModel::L1)
      .value("L21", arm::ErrorModel::L21);
  m.def("parse_error_model", &arm::parse_error_model, "name"_a);

  // matrix-io
  m.def("load_matrix", py::overload_cast<const std::filesystem::path&>(&arm::load_matrix), "path"_a);
  m.def("save_matrix", py::overload_cast<const arm::Matrix&, const std::filesystem::path&>(&arm::save_matrix), "m"_a,
        "path"_a);
  m.def("load_labels", [](const std::filesystem::path& p) { return from_labels(arm::load_labels(p)); }, "path"_a);

  // prox-ops
  py::class_<arm::DcConfig>(m, "DcConfig")
      .def(py::init<>())
      .def(py::init([](int max_iters, double tol) { return arm::DcConfig{max_iters, tol}; }), "max_iters"_a = 50,
           "tol"_a = 1e-8)
      .def_readwrite("max_iters", &arm::DcConfig::max_iters)
      .def_readwrite("tol", &arm::DcConfig::tol);
  m.attr("ARCTAN_CONVEXITY_PENALTY") = arm::kArctanConvexityPenalty;
  m.def("arctan_rank", &arm::arctan_rank, "sigma"_a);
  m.def("shrink_l1", &arm::shrink_l1, "q"_a, "tau"_a);
  m.def("shrink_l21", &arm::shrink_l21, "q"_a, "tau"_a);
  m.def(
      "prox_arctan_vector",
      [](const arm::Vector& sigma_a, double mu, const arm::DcConfig& dc) {
        auto r = arm::prox_arctan_vector(sigma_a, mu, dc);
        return py::make_tuple(r.sigma, r.iterations, r.converged);
      },
      "sigma_a"_a, "mu"_a, "dc"_a = arm::DcConfig{});
  m.def(
      "prox_arctan_matrix", [](const arm::Matrix& a, double mu, const arm::DcConfig& dc) {
        return arm::prox_arctan_matrix(a, mu, dc).value;
      },
      "a"_a, "mu"_a, "dc"_a = arm::DcConfig{});
  m.def("spectral_gradient", &arm::spectral_gradient, "a"_a);
  m.def("svt_nuclear", &arm::svt_nuclear, "a"_a, "tau"_a);

  // arm-solver
  py::class_<arm::SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("lam", &arm::SolverConfig::lambda)
      .def_readwrite("mu0", &arm::SolverConfig::mu0)
      .def_readwrite("rho", &arm::SolverConfig::rho)
      .def_readwrite("error_model", &arm::SolverConfig::error_model)
      .def_readwrite("rel_tol", &arm::SolverConfig::rel_tol)
      .def_readwrite("max_iters", &arm::SolverConfig::max_iters)
      .def_readwrite("dc", &arm::SolverConfig::dc)
      .def_readwrite("check_descent", &arm::SolverConfig::check_descent)
      .def("validate", &arm::SolverConfig::validate)
      .def_static("motion_preset", &arm::SolverConfig::motion_preset)
      .def_static("face_preset", &arm::SolverConfig::face_preset);

  py::class_<arm::SolveResult>(m, "SolveResult")
      .def_readonly("z", &arm::SolveResult::z)
      .def_readonly("e", &arm::SolveResult::e)
      .def_readonly("j", &arm::SolveResult::j)
      .def_readonly("converged", &arm::SolveResult::converged)
      .def_readonly("descent_violations", &arm::SolveResult::descent_violations)
      .def_readonly("gram_invertible", &arm::SolveResult::gram_invertible)
      .def_readonly("dc_all_converged", &arm::SolveResult::dc_all_converged)
      .def_property_readonly("iterations", &arm::SolveResult::iterations)
      .def_property_readonly("trace", [](const arm::SolveResult& r) { return trace_columns(r.trace); });

  auto release = py::call_guard<py::gil_scoped_release>();
  m.def("solve_arm", &arm::solve_arm, "x"_a, "config"_a = arm::SolverConfig{}, release);
  m.def("solve_lrr", &arm::solve_lrr_baseline, "x"_a, "config"_a = arm::SolverConfig{}, release);
  m.def("objective_value", &arm::objective_value, "j"_a, "e"_a, "lam"_a, "model"_a);

  // affinity-graph and spectral-cluster
  m.def(
      "build_affinity",
      [](const arm::Matrix& z, int alpha, double rel_tol) {
        auto g = arm::build_affinity(z, alpha, rel_tol);
        return py::make_tuple(g.w, g.rank, indices(g.isolated));
      },
      "z"_a, "alpha"_a = 2, "rel_tol"_a = 1e-6);
  m.def(
      "ncuts",
      [](const arm::Matrix& w, int k, std::uint64_t seed, int restarts) {
        arm::SpectralConfig cfg{k, seed, restarts};
        return from_labels(arm::ncuts(w, cfg).labels);
      },
      "w"_a, "k"_a, "seed"_a = 0, "restarts"_a = 20);
  m.def(
      "cluster_subspaces",
      [](const arm::Matrix& x, int k, const arm::SolverConfig& solver, const std::string& method, int alpha,
         std::uint64_t seed) {
        arm::PipelineConfig cfg;
        cfg.solver = solver;
        cfg.spectral.k = k;
        cfg.spectral.seed = seed;
        cfg.alpha = alpha;
        if (method == "lrr") cfg.surrogate = arm::RankSurrogate::Nuclear;
        else if (method != "arm") throw std::invalid_argument("method must be 'arm' or 'lrr'");
        arm::ClusteringRun run;
        {
          py::gil_scoped_release nogil;
          run = arm::cluster_subspaces(x, cfg);
        }
        return py::dict("labels"_a = from_labels(run.clusters.labels), "w"_a = run.graph.w, "z"_a = run.solve.z,
                        "e"_a = run.solve.e, "converged"_a = run.solve.converged,
                        "iterations"_a = run.solve.iterations(), "isolated"_a = indices(run.graph.isolated));
      },
      "x"_a, "k"_a, "config"_a = arm::SolverConfig{}, "method"_a = "arm", "alpha"_a = 2, "seed"_a = 0);

  // evaluation
  m.def(
      "generate_subspaces",
      [](int m_dim, int k, int d, int n, std::uint64_t seed, const std::string& mode) {
        if (mode != "independent" && mode != "random")
          throw std::invalid_argument("mode must be 'independent' or 'random'");
        auto data = arm::generate_subspaces(arm::SubspaceSpec::uniform(
            m_dim, k, d, n, seed, mode == "random" ? arm::SubspaceMode::Random : arm::SubspaceMode::Independent));
        return py::make_tuple(data.x, from_labels(data.labels));
      },
      "m"_a, "k"_a, "d"_a, "n"_a, "seed"_a = 0, "mode"_a = "independent");
  m.def(
      "corrupt",
      [](const arm::Matrix& x, const std::string& model, double level, double magnitude, std::uint64_t seed) {
        auto c = arm::corrupt(x, {arm::parse_corruption_model(model), level, magnitude, seed});
        return py::make_tuple(c.x, c.e_true);
      },
      "x"_a, "model"_a, "level"_a, "magnitude"_a = 1.0, "seed"_a = 0);
  m.def(
      "clustering_error",
      [](const IntArray& pred, const IntArray& truth) { return arm::clustering_error(to_labels(pred), to_labels(truth)); },
      "pred"_a, "truth"_a);
  m.def(
      "block_diag_mass", [](const arm::Matrix& w, const IntArray& truth) { return arm::block_diag_mass(w, to_labels(truth)); },
      "w"_a, "truth"_a);
  m.def(
      "rank_approx_profile",
      [](double sigma_max, int steps) {
        const auto rows = arm::rank_approx_profile(sigma_max, steps);
        arm::Matrix out(static_cast<arm::Index>(rows.size()), 5);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const auto& r = rows[i];
          out.row(static_cast<arm::Index>(i)) << r.sigma1, r.sigma2, r.rank, r.arctan, r.nuclear;
        }
        return out;
      },
      "sigma_max"_a, "steps"_a);
}
