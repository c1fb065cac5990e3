// Python bindings for the main operations: potential construction, kernel
// solve, Jost evaluation, pole search, Weyl-Titchmarsh reconstruction and the
// Marchenko roundtrip.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regge/errors.hpp"
#include "regge/jost.hpp"
#include "regge/kernel.hpp"
#include "regge/marchenko.hpp"
#include "regge/model.hpp"
#include "regge/parallel.hpp"
#include "regge/poles.hpp"
#include "regge/special.hpp"
#include "regge/wt.hpp"

namespace py = pybind11;
using cplx = std::complex<double>;

namespace {

regge::poles::Rect rect_from_tuple(const std::tuple<double, double, double, double>& t) {
  return {std::get<0>(t), std::get<1>(t), std::get<2>(t), std::get<3>(t)};
}

}  // namespace

PYBIND11_MODULE(warpregge, m) {
  m.doc() = "Regge poles of warped-ball Schrodinger operators";

  py::register_exception<regge::ValidationError>(m, "ValidationError");
  py::register_exception<regge::ModelError>(m, "ModelError");
  py::register_exception<regge::NumericError>(m, "NumericError");
  py::register_exception<regge::ResolutionError>(m, "ResolutionError");
  py::register_exception<regge::DataError>(m, "DataError");
  py::register_exception<regge::DomainError>(m, "DomainError");

  // ---- model ----
  py::class_<regge::model::PiecewisePoly>(m, "PiecewisePoly")
      .def(py::init<>())
      .def_readwrite("breakpoints", &regge::model::PiecewisePoly::breakpoints)
      .def_readwrite("coeff", &regge::model::PiecewisePoly::coeff)
      .def("eval", &regge::model::PiecewisePoly::eval, py::arg("x"), py::arg("deriv") = 0);

  py::class_<regge::model::WarpSpec>(m, "WarpSpec")
      .def(py::init([](int n, double lam, double a, int p,
                       std::vector<double> breakpoints,
                       std::vector<std::vector<double>> coefficients) {
             regge::model::WarpSpec s;
             s.n = n;
             s.lambda = lam;
             s.a = a;
             s.p = p;
             s.V.breakpoints = std::move(breakpoints);
             s.V.coeff = std::move(coefficients);
             return s;
           }),
           py::arg("n"), py::arg("lam"), py::arg("a"), py::arg("p"),
           py::arg("breakpoints") = std::vector<double>{},
           py::arg("coefficients") = std::vector<std::vector<double>>{})
      .def_readwrite("n", &regge::model::WarpSpec::n)
      .def_readwrite("lam", &regge::model::WarpSpec::lambda)
      .def_readwrite("a", &regge::model::WarpSpec::a)
      .def_readwrite("p", &regge::model::WarpSpec::p)
      .def_readwrite("V", &regge::model::WarpSpec::V)
      .def("validate", &regge::model::WarpSpec::validate,
           py::arg("allow_lambda_zero") = false);

  py::class_<regge::model::PotentialTable>(m, "PotentialTable")
      .def_readonly("grid", &regge::model::PotentialTable::grid)
      .def_readonly("qf_values", &regge::model::PotentialTable::qf_values)
      .def_readonly("jump_order", &regge::model::PotentialTable::jump_order)
      .def_readonly("jump_value", &regge::model::PotentialTable::jump_value)
      .def_readonly("qf_left_a", &regge::model::PotentialTable::qf_left_a)
      .def_readonly("f0", &regge::model::PotentialTable::f0)
      .def_readonly("f0_prime", &regge::model::PotentialTable::f0_prime)
      .def_readonly("a", &regge::model::PotentialTable::a)
      .def_readonly("degenerate", &regge::model::PotentialTable::degenerate)
      .def("qf", [](const regge::model::PotentialTable& t, double x) { return t.qf(x); })
      .def("integral_tail", &regge::model::PotentialTable::integral_tail);

  m.def("build_potential", &regge::model::build_potential, py::arg("spec"),
        py::arg("grid_size"));
  m.def("potential_from_function", &regge::model::potential_from_function,
        py::arg("qf"), py::arg("a"), py::arg("p"), py::arg("jump_value"),
        py::arg("grid_size"), py::arg("f0") = 1.0, py::arg("f0_prime") = -1.0,
        py::arg("pieces") = std::vector<double>{});

  py::class_<regge::model::TransversalSpectrum>(m, "TransversalSpectrum")
      .def_readonly("mu_sq", &regge::model::TransversalSpectrum::mu_sq)
      .def_readonly("multiplicity", &regge::model::TransversalSpectrum::multiplicity)
      .def_readonly("z", &regge::model::TransversalSpectrum::z);

  m.def("shifted_momenta",
        py::overload_cast<const std::vector<double>&, int>(&regge::model::shifted_momenta),
        py::arg("mu_sq"), py::arg("n"));
  m.def("sphere_spectrum", &regge::model::sphere_spectrum, py::arg("n"), py::arg("kmax"));

  // ---- special ----
  m.def("gamma", &regge::special::gamma, py::arg("z"));
  m.def("bessel_j", &regge::special::bessel_j, py::arg("z"), py::arg("t"));
  m.def("bessel_j_dt", &regge::special::bessel_j_dt, py::arg("z"), py::arg("t"));
  m.def("normalized_ratio", &regge::special::normalized_ratio, py::arg("z"),
        py::arg("t"), py::arg("delta") = 0.25);
  m.def("remainder_r", &regge::special::remainder_r, py::arg("s"), py::arg("z"),
        py::arg("deriv_order"), py::arg("lam"), py::arg("delta") = 0.25);

  // ---- kernel ----
  py::class_<regge::kernel::KernelSolution>(m, "KernelSolution")
      .def_property_readonly("N", [](const regge::kernel::KernelSolution& s) { return s.grid.N; })
      .def_property_readonly("a", [](const regge::kernel::KernelSolution& s) { return s.grid.a; })
      .def_readonly("lam", &regge::kernel::KernelSolution::lambda)
      .def_readonly("p", &regge::kernel::KernelSolution::p)
      .def_readonly("jump_s_p", &regge::kernel::KernelSolution::jump_s_p)
      .def_readonly("iterations", &regge::kernel::KernelSolution::iterations)
      .def_readonly("residual", &regge::kernel::KernelSolution::residual)
      .def_readonly("contraction_M", &regge::kernel::KernelSolution::contraction_M)
      .def_readonly("increment_sup", &regge::kernel::KernelSolution::increment_sup)
      .def_readonly("trace_s", &regge::kernel::KernelSolution::trace_s)
      .def_readonly("trace_K", &regge::kernel::KernelSolution::trace_K)
      .def_readonly("trace_dKx", &regge::kernel::KernelSolution::trace_dKx)
      .def("K00", &regge::kernel::KernelSolution::K00)
      .def("K_at", [](const regge::kernel::KernelSolution& s, int i, int j) {
        if (j > i || i > s.grid.N) throw regge::ValidationError("node out of range");
        return s.K[s.grid.idx(i, j)];
      });

  m.def("solve_kernel", &regge::kernel::solve_kernel, py::arg("potential"),
        py::arg("lam"), py::arg("N"), py::arg("tol"));
  m.def("jump_estimate", &regge::kernel::jump_estimate, py::arg("solution"), py::arg("p"));
  m.def("save_kernel", &regge::kernel::save_kernel, py::arg("solution"), py::arg("path"));

  // ---- jost ----
  m.def("psi_unperturbed", &regge::jost::psi_unperturbed, py::arg("x"), py::arg("z"),
        py::arg("lam"));
  m.def("psi", &regge::jost::psi, py::arg("z"), py::arg("kernel"), py::arg("lam"));
  m.def("psi_prime", &regge::jost::psi_prime, py::arg("z"), py::arg("kernel"),
        py::arg("lam"));
  m.def(
      "weyl_m",
      [](cplx z, const regge::kernel::KernelSolution& ker, double lam) {
        auto v = regge::jost::weyl_m(z, ker, lam);
        return py::make_tuple(v.value, v.pole);
      },
      py::arg("z"), py::arg("kernel"), py::arg("lam"),
      "Returns (value, is_pole)");
  m.def(
      "identity_checks",
      [](cplx z, const regge::kernel::KernelSolution& ker, double lam) {
        auto r = regge::jost::identity_checks(z, ker, lam);
        return py::make_tuple(r.wronskian, r.reflection, r.wronskian_scale,
                              r.reflection_scale);
      },
      py::arg("z"), py::arg("kernel"), py::arg("lam"),
      "Returns (wronskian_residual, reflection_residual, wronskian_scale, reflection_scale)");

  // ---- poles ----
  py::enum_<regge::poles::Family>(m, "Family")
      .value("alpha", regge::poles::Family::alpha)
      .value("beta", regge::poles::Family::beta)
      .value("unclassified", regge::poles::Family::unclassified);

  py::class_<regge::poles::ReggePole>(m, "ReggePole")
      .def_readonly("location", &regge::poles::ReggePole::location)
      .def_readonly("multiplicity", &regge::poles::ReggePole::multiplicity)
      .def_readonly("family", &regge::poles::ReggePole::family)
      .def_readonly("residue", &regge::poles::ReggePole::residue)
      .def_readonly("winding", &regge::poles::ReggePole::winding);

  py::class_<regge::poles::PoleSearchResult>(m, "PoleSearchResult")
      .def_readonly("poles", &regge::poles::PoleSearchResult::poles)
      .def_readonly("cells_processed", &regge::poles::PoleSearchResult::cells_processed)
      .def_property_readonly("uncovered", [](const regge::poles::PoleSearchResult& r) {
        std::vector<std::tuple<double, double, double, double>> out;
        for (const auto& c : r.uncovered) out.emplace_back(c.re0, c.re1, c.im0, c.im1);
        return out;
      });

  m.def(
      "count_zeros",
      [](const std::function<cplx(cplx)>& f,
         const std::tuple<double, double, double, double>& rect) {
        return regge::poles::count_zeros(f, rect_from_tuple(rect));
      },
      py::arg("f"), py::arg("rect"));
  m.def(
      "locate_poles",
      [](const std::tuple<double, double, double, double>& rect,
         const regge::kernel::KernelSolution& ker, double lam, double tol) {
        regge::poles::SearchOptions opts;
        opts.tol = tol;
        return regge::poles::locate_poles(rect_from_tuple(rect), ker, lam, opts);
      },
      py::arg("rect"), py::arg("kernel"), py::arg("lam"), py::arg("tol") = 1e-10);
  m.def("residue_at", &regge::poles::residue_at, py::arg("pole"), py::arg("multiplicity"),
        py::arg("kernel"), py::arg("lam"));
  m.def("beta_constant_A", &regge::poles::beta_constant_A, py::arg("kernel"));
  m.def("predict_beta", &regge::poles::predict_beta, py::arg("j_min"), py::arg("j_max"),
        py::arg("A"), py::arg("a"), py::arg("p"));
  m.def("predict_alpha", &regge::poles::predict_alpha, py::arg("k_min"), py::arg("k_max"));

  // ---- wt ----
  py::class_<regge::wt::WeylModel>(m, "WeylModel")
      .def_readonly("poles", &regge::wt::WeylModel::poles)
      .def_readonly("m0", &regge::wt::WeylModel::m0)
      .def_readonly("m0_prime", &regge::wt::WeylModel::m0_prime)
      .def_readonly("zero_pole_mode", &regge::wt::WeylModel::zero_pole_mode)
      .def_readonly("truncation_radius", &regge::wt::WeylModel::truncation_radius);

  m.def("build_weyl_model", &regge::wt::build_weyl_model, py::arg("poles"),
        py::arg("kernel"), py::arg("lam"), py::arg("truncation_radius"));
  m.def("reconstruct_m", &regge::wt::reconstruct_m, py::arg("z"), py::arg("model"));
  m.def(
      "synthetic_expansion",
      [](const regge::wt::WeylModel& model) {
        auto s = regge::wt::synthetic_expansion(model);
        return py::make_tuple(s.terms, s.laurent_fallback);
      },
      py::arg("model"), "Returns ([(z_i, a_i)], laurent_fallback)");
  m.def(
      "evaluate_synthetic",
      [](cplx z, const regge::wt::WeylModel& model) {
        return regge::wt::evaluate_synthetic(z, regge::wt::synthetic_expansion(model));
      },
      py::arg("z"), py::arg("model"));
  m.def("truncation_budget", &regge::wt::truncation_budget, py::arg("z"), py::arg("model"));
  m.def(
      "dtn_multipliers",
      [](const regge::wt::WeylModel& model,
         const regge::model::TransversalSpectrum& sp, double f0, double f0p, int n,
         const regge::kernel::KernelSolution& ker, double lam, bool recon) {
        auto es = regge::wt::dtn_multipliers(model, sp, f0, f0p, n, ker, lam, recon);
        std::vector<std::tuple<double, cplx, bool>> out;
        for (const auto& e : es) out.emplace_back(e.z_k, e.value, e.pole_collision);
        return out;
      },
      py::arg("model"), py::arg("spectrum"), py::arg("f0"), py::arg("f0_prime"),
      py::arg("n"), py::arg("kernel"), py::arg("lam"),
      py::arg("use_reconstruction") = true);

  // ---- marchenko ----
  py::class_<regge::marchenko::BoundState>(m, "BoundState")
      .def(py::init([](double alpha, double mk) {
             return regge::marchenko::BoundState{alpha, mk};
           }),
           py::arg("alpha"), py::arg("m"))
      .def_readonly("alpha", &regge::marchenko::BoundState::alpha)
      .def_readonly("m", &regge::marchenko::BoundState::m);

  py::class_<regge::marchenko::ScatteringData>(m, "ScatteringData")
      .def_readonly("k_grid", &regge::marchenko::ScatteringData::k_grid)
      .def_readonly("S", &regge::marchenko::ScatteringData::S)
      .def_readonly("bound_states", &regge::marchenko::ScatteringData::bound_states)
      .def_readonly("lattice_h", &regge::marchenko::ScatteringData::lattice_h)
      .def_readonly("F", &regge::marchenko::ScatteringData::F)
      .def_readonly("x_max", &regge::marchenko::ScatteringData::x_max)
      .def_readonly("tail_estimate", &regge::marchenko::ScatteringData::tail_estimate);

  py::class_<regge::marchenko::RoundtripReport>(m, "RoundtripReport")
      .def_readonly("x", &regge::marchenko::RoundtripReport::x)
      .def_readonly("qf_true", &regge::marchenko::RoundtripReport::qf_true)
      .def_readonly("qf_recovered", &regge::marchenko::RoundtripReport::qf_recovered)
      .def_readonly("l2_rel", &regge::marchenko::RoundtripReport::l2_rel)
      .def_readonly("linf", &regge::marchenko::RoundtripReport::linf)
      .def_readonly("k_max", &regge::marchenko::RoundtripReport::k_max)
      .def_readonly("tail_estimate", &regge::marchenko::RoundtripReport::tail_estimate);

  m.def("s_function", &regge::marchenko::s_function, py::arg("k_grid"),
        py::arg("kernel"), py::arg("lam"));
  m.def("find_bound_states", &regge::marchenko::find_bound_states, py::arg("kernel"),
        py::arg("lam"));
  m.def("norming_constant", &regge::marchenko::norming_constant, py::arg("alpha"),
        py::arg("kernel"), py::arg("lam"));
  m.def(
      "marchenko_roundtrip",
      [](const regge::model::PotentialTable& pot,
         const regge::kernel::KernelSolution& ker, double lam, double k_max,
         double k_step, double lattice_h) {
        regge::marchenko::RoundtripOptions opts;
        opts.assemble.k_max = k_max;
        opts.assemble.k_step = k_step;
        opts.assemble.lattice_h = lattice_h;
        return regge::marchenko::marchenko_roundtrip(pot, ker, lam, opts);
      },
      py::arg("potential"), py::arg("kernel"), py::arg("lam"), py::arg("k_max") = 0.0,
      py::arg("k_step") = 0.05, py::arg("lattice_h") = 0.02);

  m.def("set_worker_count", &regge::set_worker_count, py::arg("workers"));
  m.attr("__version__") = "0.1.0";
}
