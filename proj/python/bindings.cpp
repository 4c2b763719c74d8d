#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <cstdlib>

#include "fraclog/blowup.hpp"
#include "fraclog/cli_io.hpp"
#include "fraclog/errors.hpp"
#include "fraclog/experiments.hpp"
#include "fraclog/operator.hpp"
#include "fraclog/special_functions.hpp"
#include "fraclog/spectral.hpp"

namespace py = pybind11;
using namespace fraclog;

namespace {

py::array_t<double> to_numpy(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

Field field_from(const Grid& g, const std::vector<double>& values, const ExteriorSpec& ext) {
    if (values.size() != g.size()) fail(ErrorKind::configuration, "values must have one entry per grid node");
    return {values, ext};
}

py::dict report_dict(const SolveReport& r) {
    py::dict d;
    d["solution"] = to_numpy(r.solution.values);
    d["residual"] = r.residual_inf;
    d["iterations"] = r.iterations;
    d["converged"] = r.converged;
    d["diagnostic"] = r.diagnostic;
    return d;
}

}  // namespace

PYBIND11_MODULE(_fraclog, m) {
    m.doc() = "Fractional logistic equation solvers (1-D, unnormalized kernel).";

    static py::exception<Error> error(m, "FraclogError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::tuple args = py::make_tuple(to_string(e.kind()), e.what());
            PyErr_SetObject(error.ptr(), args.ptr());
        }
    });

    m.def("c_tau", &c_tau, py::arg("tau"), py::arg("alpha"));
    m.def("tau0", &tau0, py::arg("alpha"));
    m.def("admissible_p", &admissible_p, py::arg("p"), py::arg("alpha"));
    m.def("blowup_exponent", &blowup_exponent, py::arg("p"), py::arg("alpha"));
    m.def("blowup_amplitude", &blowup_amplitude, py::arg("p"), py::arg("alpha"), py::arg("mu"), py::arg("b"));
    m.def("picone_form", &picone_form, py::arg("ux"), py::arg("uy"), py::arg("vx"), py::arg("vy"));
    m.def("remark11_gap", &remark11_gap, py::arg("N"), py::arg("alpha"));

    py::class_<Grid>(m, "Grid")
        .def_readonly("domain_radius", &Grid::domain_radius)
        .def_readonly("spacing", &Grid::spacing)
        .def_readonly("box_radius", &Grid::box_radius)
        .def_property_readonly("nodes", [](const Grid& g) { return to_numpy(g.nodes); })
        .def_property_readonly("dist", [](const Grid& g) { return to_numpy(g.dist); })
        .def_property_readonly("interior", [](const Grid& g) { return g.interior; })
        .def("center_index", &Grid::center_index)
        .def("__len__", &Grid::size);
    m.def("build_grid", py::overload_cast<double, double, double>(&build_grid), py::arg("R"), py::arg("h"),
          py::arg("L"));
    m.def("build_grid", py::overload_cast<double, double>(&build_grid), py::arg("R"), py::arg("h"));

    py::class_<ZeroExterior>(m, "ZeroExterior").def(py::init<>());
    py::class_<ConstantExterior>(m, "ConstantExterior")
        .def(py::init([](double c) { return ConstantExterior{c}; }), py::arg("c"))
        .def_readwrite("c", &ConstantExterior::c);
    py::class_<PowerDecayExterior>(m, "PowerDecayExterior")
        .def(py::init([](double c, double s) { return PowerDecayExterior{c, s}; }), py::arg("c"), py::arg("s"))
        .def_readwrite("c", &PowerDecayExterior::c)
        .def_readwrite("s", &PowerDecayExterior::s);
    py::class_<GaussianBumpExterior>(m, "GaussianBumpExterior")
        .def(py::init([](double c, double sigma) { return GaussianBumpExterior{c, sigma}; }), py::arg("c"),
             py::arg("sigma"))
        .def_readwrite("c", &GaussianBumpExterior::c)
        .def_readwrite("sigma", &GaussianBumpExterior::sigma);
    py::class_<CosineExterior>(m, "CosineExterior")
        .def(py::init([](double c, double k) { return CosineExterior{c, k}; }), py::arg("c"), py::arg("k"))
        .def_readwrite("c", &CosineExterior::c)
        .def_readwrite("k", &CosineExterior::k);

    py::class_<Coefficient>(m, "Coefficient")
        .def(py::init([](double base, double amplitude, double center, double width) {
                 return Coefficient{base, amplitude, center, width};
             }),
             py::arg("base") = 1.0, py::arg("amplitude") = 0.0, py::arg("center") = 0.0, py::arg("width") = 1.0)
        .def_readwrite("base", &Coefficient::base)
        .def_readwrite("amplitude", &Coefficient::amplitude)
        .def_readwrite("center", &Coefficient::center)
        .def_readwrite("width", &Coefficient::width)
        .def("__call__", &Coefficient::operator());

    m.def(
        "apply_fractional_laplacian",
        [](const std::vector<double>& values, const Grid& g, double alpha, const ExteriorSpec& ext) {
            return apply_fractional_laplacian(field_from(g, values, ext), g, alpha);
        },
        py::arg("values"), py::arg("grid"), py::arg("alpha"), py::arg("exterior") = ExteriorSpec{ZeroExterior{}},
        "(-Delta)^alpha at interior nodes; values are given on every box node.");

    m.def(
        "first_eigenpair",
        [](const Grid& g, double alpha, const Coefficient& a) {
            const EigenPair e = first_eigenpair(g, a, alpha);
            return py::make_tuple(e.mu1, to_numpy(e.phi1.values));
        },
        py::arg("grid"), py::arg("alpha"), py::arg("a") = Coefficient{});
    m.def(
        "eigen_scaling_curve",
        [](const std::vector<double>& radii, double alpha, double h_rel) {
            py::list out;
            for (const ScalingRow& r : eigen_scaling_curve(radii, alpha, h_rel))
                out.append(py::make_tuple(r.r, r.mu1, r.mu1_r2alpha));
            return out;
        },
        py::arg("radii"), py::arg("alpha"), py::arg("h_rel"));

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init([](const Grid& grid, double alpha, double p, double mu, const Coefficient& a,
                         const Coefficient& b, const ExteriorSpec& exterior, double tol) {
                 ProblemSpec s;
                 s.grid = grid;
                 s.alpha = alpha;
                 s.p = p;
                 s.mu = mu;
                 s.a = a;
                 s.b = b;
                 s.exterior = exterior;
                 s.tol = tol;
                 return s;
             }),
             py::arg("grid"), py::arg("alpha") = 0.5, py::arg("p") = 2.5, py::arg("mu") = 1.0,
             py::arg("a") = Coefficient{}, py::arg("b") = Coefficient{}, py::arg("exterior") = ExteriorSpec{ZeroExterior{}},
             py::arg("tol") = 1e-9)
        .def_readwrite("alpha", &ProblemSpec::alpha)
        .def_readwrite("p", &ProblemSpec::p)
        .def_readwrite("mu", &ProblemSpec::mu)
        .def_readwrite("tol", &ProblemSpec::tol)
        .def_readonly("grid", &ProblemSpec::grid);

    m.def(
        "solve",
        [](const ProblemSpec& s, const std::string& method) {
            if (method == "newton") return report_dict(newton_solve(s, default_bounds(s).super));
            if (method == "monotone_sub") return report_dict(monotone_solve(s, Start::sub));
            if (method == "monotone_super") return report_dict(monotone_solve(s, Start::super));
            fail(ErrorKind::configuration, "method must be newton, monotone_sub or monotone_super");
        },
        py::arg("spec"), py::arg("method") = "newton");

    m.def(
        "solve_blowup",
        [](const ProblemSpec& s, const std::vector<double>& caps, double delta) {
            const BlowupReport r = solve_blowup(s, {caps, delta});
            py::dict d = report_dict(r.solve);
            d["tau"] = r.tau;
            d["kappa"] = r.kappa;
            d["stabilized"] = r.stabilized;
            py::list stages;
            for (const CapStage& c : r.stages) stages.append(py::make_tuple(c.cap, c.center_value, c.change));
            d["stages"] = stages;
            return d;
        },
        py::arg("spec"), py::arg("caps") = std::vector<double>{1e1, 1e2, 1e3, 1e4, 1e5, 1e6},
        py::arg("delta") = 0.25);
    m.def(
        "fit_boundary_rate",
        [](const std::vector<double>& u, const Grid& g, double d_min, double d_max) {
            const RateFit f = fit_boundary_rate(field_from(g, u, ZeroExterior{}), g, d_min, d_max);
            return py::make_tuple(f.slope, f.std_error, f.samples);
        },
        py::arg("u"), py::arg("grid"), py::arg("d_min"), py::arg("d_max"));
    m.def(
        "verify_barrier",
        [](const Grid& g, double tau, double alpha, double delta) { return verify_barrier(g, tau, alpha, delta); },
        py::arg("grid"), py::arg("tau"), py::arg("alpha"), py::arg("delta") = 0.25);

    m.def(
        "run_squeeze",
        [](double lambda, double p, double alpha, const std::vector<double>& radii, double h_rel) {
            py::list rows;
            for (const SqueezeRow& r : run_squeeze(lambda, p, alpha, radii, h_rel).rows) {
                py::dict d;
                d["R"] = r.R;
                d["v_center"] = r.v_center;
                d["w_center"] = r.w_center;
                d["gap"] = r.gap;
                d["target"] = r.target;
                d["failed"] = r.failed;
                d["diagnostic"] = r.diagnostic;
                rows.append(d);
            }
            return rows;
        },
        py::arg("lambda_"), py::arg("p"), py::arg("alpha"), py::arg("radii"), py::arg("h_rel"));
    m.def(
        "run_increasing_balls",
        [](const Coefficient& a, const Coefficient& b, double lambda, double p, double alpha,
           const std::vector<double>& radii, double h) {
            const BallsResult r = run_increasing_balls(a, b, lambda, p, alpha, radii, h);
            py::dict d;
            d["M0"] = r.M0;
            py::list rows;
            for (const BallsRow& row : r.rows) rows.append(py::make_tuple(row.R, row.center, row.max));
            d["rows"] = rows;
            py::list sols;
            for (std::size_t k = 0; k < r.grids.size(); ++k)
                sols.append(py::make_tuple(r.grids[k], to_numpy(r.solutions[k].values)));
            d["solutions"] = sols;
            return d;
        },
        py::arg("a"), py::arg("b"), py::arg("lambda_"), py::arg("p"), py::arg("alpha"), py::arg("radii"),
        py::arg("h"));
    m.def(
        "tail_profile",
        [](const std::vector<double>& u, const Grid& g, double a_inf, double b_inf, double p, double lambda) {
            const TailTable t = tail_profile(field_from(g, u, ZeroExterior{}), g, a_inf, b_inf, p, lambda);
            py::list rows;
            for (const TailRow& r : t.rows) rows.append(py::make_tuple(r.r, r.u, r.deviation));
            return py::make_tuple(t.target, rows);
        },
        py::arg("u"), py::arg("grid"), py::arg("a_inf"), py::arg("b_inf"), py::arg("p"), py::arg("lambda_") = 1.0);

    m.def(
        "parse_config",
        [](const std::vector<std::string>& args, std::optional<std::string> file_text) {
            const ParseResult r = parse_config(args, file_text);
            return py::make_tuple(r.config ? py::object(py::str(to_text(*r.config))) : py::object(py::none()), r.errors);
        },
        py::arg("args"), py::arg("file_text") = py::none(),
        "Returns (canonical config text or None, list of errors).");

    m.def(
        "run",
        [](const std::vector<std::string>& args, std::optional<std::string> output_dir) {
            const ParseResult parsed = parse_config(args);
            std::string dir = output_dir ? *output_dir : "";
            if (dir.empty()) {
                const char* env = std::getenv(output_dir_env);
                dir = env ? env : ".";
            }
            RunManifest manifest;
            if (!parsed.config) {
                manifest.config.command = args.empty() ? "" : args.front();
                manifest.status = "failed";
                manifest.failure_stage = "parse_config";
                for (const std::string& e : parsed.errors) manifest.error += (manifest.error.empty() ? "" : "; ") + e;
                write_outputs({}, manifest, dir);
                fail(ErrorKind::configuration, manifest.error);
            }
            const auto start = std::chrono::steady_clock::now();
            std::vector<Table> tables;
            try {
                py::gil_scoped_release release;
                tables = run_command(*parsed.config, manifest);
            } catch (const Error& e) {
                manifest.status = "failed";
                manifest.failure_stage = manifest.stages.empty() ? manifest.config.command : "after " + manifest.stages.back().name;
                manifest.error = std::string(to_string(e.kind())) + ": " + e.what();
                write_outputs({}, manifest, dir);
                throw;
            }
            manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return write_outputs(tables, manifest, dir).outputs;
        },
        py::arg("args"), py::arg("output_dir") = py::none(),
        "Runs a CLI command (e.g. ['ctau', 'alpha=0.5']) and returns the written file names.");
}
