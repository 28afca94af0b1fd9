#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wrinkle/acceptance.hpp"
#include "wrinkle/energy.hpp"
#include "wrinkle/error.hpp"
#include "wrinkle/herringbone.hpp"

namespace py = pybind11;
using namespace wrinkle;

namespace {

using Pt = std::pair<double, double>;
Point2 P(const Pt& p) { return {p.first, p.second}; }
Pt T(Point2 p) { return {p.x, p.y}; }

py::array_t<double> grid_array(const std::vector<double>& v, int nx, int ny) {
    py::array_t<double> a({ny, nx});
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

}  // namespace

PYBIND11_MODULE(_wrinkle, m) {
    m.doc() = "Wrinkling of thin shells on liquid substrates";
    m.attr("__version__") = WRINKLE_VERSION;

    py::register_exception<Error>(m, "WrinkleError", PyExc_RuntimeError);

    py::class_<Domain>(m, "Domain")
        .def_static("disc", [](double r, Pt c) { return Domain::disc(r, P(c)); }, py::arg("radius"),
                    py::arg("center") = Pt{0, 0})
        .def_static("ellipse", [](double a, double b, Pt c) { return Domain::ellipse(a, b, P(c)); }, py::arg("a"),
                    py::arg("b"), py::arg("center") = Pt{0, 0})
        .def_static("half_disc",
                    [](double r, Pt c, double o) { return Domain::half_disc(r, P(c), o); }, py::arg("radius"),
                    py::arg("center") = Pt{0, 0}, py::arg("orientation") = pi / 2)
        .def_static("rectangle", [](double a, double b, Pt c) { return Domain::rectangle(a, b, P(c)); },
                    py::arg("a"), py::arg("b"), py::arg("center") = Pt{0, 0})
        .def_static("convex_polygon",
                    [](const std::vector<Pt>& v) {
                        std::vector<Point2> pts;
                        for (const Pt& p : v) pts.push_back(P(p));
                        return Domain::convex_polygon(pts);
                    })
        .def("contains", [](const Domain& d, Pt x) { return d.contains(P(x)); })
        .def("boundary_distance", [](const Domain& d, Pt x) { return d.boundary_distance(P(x)); })
        .def("nearest_boundary_points",
             [](const Domain& d, Pt x, double tol) {
                 std::vector<Pt> out;
                 for (const auto& n : d.nearest_boundary_points(P(x), tol)) out.push_back(T(n.point));
                 return out;
             },
             py::arg("x"), py::arg("tol") = 1e-6)
        .def("medial_axis",
             [](const Domain& d) {
                 std::vector<std::pair<Pt, Pt>> out;
                 for (const auto& s : d.medial_axis().polyline(128)) out.push_back({T(s.a), T(s.b)});
                 for (const auto& p : d.medial_axis().points) out.push_back({T(p), T(p)});
                 return out;
             })
        .def_property_readonly("area", &Domain::area)
        .def_property_readonly("perimeter", &Domain::perimeter)
        .def_property_readonly("diameter", &Domain::diameter)
        .def("__repr__", &Domain::describe);

    py::class_<ShellProfile>(m, "ShellProfile")
        .def_static("flat", &ShellProfile::flat)
        .def_static("constant", &ShellProfile::constant, py::arg("K"))
        .def_static("paraboloid", [](double k1, double k2, Pt c) { return ShellProfile::paraboloid(k1, k2, P(c)); },
                    py::arg("k1"), py::arg("k2"), py::arg("center") = Pt{0, 0})
        .def_static("from_csv", &ShellProfile::from_csv)
        .def("curvature", [](const ShellProfile& s, Pt x) { return s.curvature(P(x)); })
        .def("__repr__", &ShellProfile::describe);

    m.def("phi_plus", [](const Domain& d, Pt x) { return phi_plus(d, P(x)); });
    m.def("phi_minus", [](const Domain& d, Pt x) { return phi_minus(d, P(x)); });
    m.def("phi_plus_generic", [](const Domain& d, Pt x, int n) { return phi_plus_generic(d, P(x), n); },
          py::arg("domain"), py::arg("x"), py::arg("n") = 512);

    py::class_<DefectField>(m, "DefectField")
        .def_property_readonly("primal", &DefectField::primal)
        .def_property_readonly("min_lambda", &DefectField::min_lambda)
        .def_property_readonly("sign_violation", &DefectField::sign_violation)
        .def("lambda_at", [](const DefectField& f, Pt x) { return f.lambda_at(P(x)); })
        .def("mu_at",
             [](const DefectField& f, Pt x) -> std::optional<std::array<double, 3>> {
                 const auto m = f.mu_at(P(x));
                 if (!m) return std::nullopt;
                 return std::array<double, 3>{m->xx, m->xy, m->yy};
             })
        .def("lambda_grid", [](const DefectField& f) {
            return grid_array(f.lambda_grid(), f.grid().nx(), f.grid().ny());
        });

    m.def(
        "defect_field",
        [](const Domain& d, const ShellProfile& s, int resolution, double angle) {
            DefectOptions o;
            o.grid = {resolution, resolution};
            o.u.angle = angle;
            return defect_field(d, s, o);
        },
        py::arg("domain"), py::arg("shell"), py::arg("resolution") = 256, py::arg("u_angle") = 0.0);
    m.def("duality_gap", [](const Domain& d, const ShellProfile& s, int n) { return duality_gap(d, s, {n, n}); },
          py::arg("domain"), py::arg("shell"), py::arg("resolution") = 256);

    py::class_<HerringboneParams>(m, "HerringboneParams")
        .def_readonly("l_wr", &HerringboneParams::l_wr)
        .def_readonly("l_sh", &HerringboneParams::l_sh)
        .def_readonly("l_avg", &HerringboneParams::l_avg)
        .def_readonly("delta_int", &HerringboneParams::delta_int)
        .def_readonly("delta_ext", &HerringboneParams::delta_ext);
    m.def("optimal_params", py::overload_cast<double, double, double>(&optimal_params), py::arg("b"), py::arg("k"),
          py::arg("ratio") = 1.0);
    m.def("profile_A", &profile_A);
    m.def("cutoff", &cutoff);

    py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
        .def_readonly("stretching", &EnergyBreakdown::stretching)
        .def_readonly("bending", &EnergyBreakdown::bending)
        .def_readonly("substrate", &EnergyBreakdown::substrate)
        .def_readonly("surface", &EnergyBreakdown::surface)
        .def_readonly("total", &EnergyBreakdown::total);

    m.def(
        "herringbone_energy",
        [](const Domain& d, std::array<double, 3> mu, double b, double k, double gamma, double h_factor) {
            const Sym2 M{mu[0], mu[1], mu[2]};
            const TargetDefect t = TargetDefect::from(M);
            const HerringboneParams p = optimal_params(b, k, t);
            const TargetFunction f = [M](Point2) { return std::optional<Sym2>(M); };
            const PiecewiseHerringbone hb(d, f, p);
            return energy_against_target(hb, d, f, {b, k, gamma}, p.l_wr / h_factor);
        },
        py::arg("domain"), py::arg("mu"), py::arg("b"), py::arg("k") = 1.0, py::arg("gamma") = 0.0,
        py::arg("h_factor") = 16.0);

    py::class_<CriterionResult>(m, "CriterionResult")
        .def_readonly("id", &CriterionResult::id)
        .def_readonly("name", &CriterionResult::name)
        .def_readonly("passed", &CriterionResult::pass)
        .def_readonly("detail", &CriterionResult::detail)
        .def("__repr__", &format_result);
    m.def(
        "run_acceptance",
        [](std::vector<int> only, bool diagnostics) {
            AcceptanceOptions o;
            o.only = std::move(only);
            o.diagnostics = diagnostics;
            py::gil_scoped_release release;
            return run_acceptance(o);
        },
        py::arg("only") = std::vector<int>{}, py::arg("diagnostics") = false);
}
