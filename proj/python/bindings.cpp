#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rbmo/io.hpp"

namespace py = pybind11;
using namespace rbmo;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null:
            return py::none();
        case json::value_t::boolean:
            return py::bool_(j.get<bool>());
        case json::value_t::number_integer:
            return py::int_(j.get<long long>());
        case json::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case json::value_t::number_float:
            return py::float_(j.get<double>());
        case json::value_t::string:
            return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(json_to_py(v));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default:
            return py::none();
    }
}

DominatingFunction lambda_for(const Space& space, const std::string& spec) {
    return lambda_from_spec(space, spec);
}

}  // namespace

PYBIND11_MODULE(_rbmo, m) {
    m.doc() = "finite metric measure spaces: doubling diagnostics, RBMO norms, John-Nirenberg";

    py::class_<Ball>(m, "Ball")
        .def(py::init<PointId, double>(), py::arg("center"), py::arg("radius"))
        .def_readonly("center", &Ball::center)
        .def_readonly("radius", &Ball::radius)
        .def("__repr__", [](const Ball& b) {
            return "Ball(center=" + std::to_string(b.center) +
                   ", radius=" + std::to_string(b.radius) + ")";
        });

    py::class_<Space>(m, "Space")
        .def_static("from_coords", &Space::from_coords, py::arg("coords"), py::arg("weights"),
                    py::arg("names") = std::vector<std::string>{})
        .def_static("from_matrix", &Space::from_matrix, py::arg("dist"), py::arg("weights"),
                    py::arg("names") = std::vector<std::string>{})
        .def_static("generate", &generate_space, py::arg("spec"))
        .def("__len__", &Space::size)
        .def("dist", &Space::dist)
        .def("weight", &Space::weight)
        .def("total_mass", &Space::total_mass)
        .def("members", [](const Space& s, const Ball& b) { return s.members(b); })
        .def("measure", [](const Space& s, const Ball& b) { return s.measure(b); })
        .def("average", &Space::average)
        .def("restrict", &Space::restrict)
        .def("to_json", [](const Space& s) { return json_to_py(space_to_json(s)); });

    m.def("make_function", &make_function, py::arg("space"), py::arg("spec"));

    m.def("canonical_ball_count",
          [](const Space& s) { return CanonicalFamily(s).size(); });

    m.def("diagnostics", [](const Space& s) {
        return json_to_py(diagnostics_to_json(s, doubling_diagnostics(s)));
    });

    m.def("fit_power_law_constant",
          [](const Space& s, double d) { return fit_power_law(s, d).power_C(); });

    m.def("verify_lambda", [](const Space& s, const std::string& lambda_spec) {
        return json_to_py(upper_doubling_to_json(
            verify_upper_doubling(s, lambda_for(s, lambda_spec))));
    });

    m.def("maximal_function", [](const Space& s, const std::vector<double>& f) {
        return maximal_function(s, f).values;
    });

    m.def("weak_type_check",
          [](const Space& s, const std::vector<double>& f, const std::vector<double>& grid) {
              return json_to_py(weak_type_to_json(weak_type_check(s, f, grid)));
          });

    m.def("bmo_norm", &bmo_norm);

    m.def("differentiation_check",
          [](const Space& s, const std::vector<double>& f, double beta) {
              const DifferentiationReport rep = differentiation_check(s, f, beta);
              py::dict out;
              out["pass"] = rep.pass;
              out["radii"] = rep.radii;
              out["beta"] = rep.beta;
              return out;
          });

    m.def(
        "solve_rbmo",
        [](const Space& s, const std::vector<double>& f, double rho,
           const std::string& lambda_spec) {
            const RBMOProblem problem = build_problem(s, lambda_for(s, lambda_spec), f, rho);
            const AdmissibleFamily fam = solve_rbmo(problem);
            py::dict out;
            out["A"] = fam.A;
            out["f_B"] = fam.f_B;
            out["pairs"] = static_cast<int>(problem.pairs.size());
            out["min_slack"] = admissibility_slack(problem, fam).min_slack;
            return out;
        },
        py::arg("space"), py::arg("f"), py::arg("rho") = 2.0, py::arg("lambda_spec") = "fit:1");

    m.def(
        "verify_jn",
        [](const Space& s, const std::vector<double>& f, double rho,
           const std::string& lambda_spec) {
            const DominatingFunction lambda = lambda_for(s, lambda_spec);
            const RBMOProblem problem = build_problem(s, lambda, f, rho);
            const AdmissibleFamily fam = solve_rbmo(problem);
            const DoublingDiagnostics diag = doubling_diagnostics(s);
            const DoublingParams params = default_params(diag, lambda.C_lambda(), rho);
            const CanonicalFamily& cf = problem.family;
            const Ball b0 = cf.ball(cf.index(0, cf.count(0) - 1));
            std::vector<double> grid;
            const JNReport pre = verify_jn(problem, fam, b0, params, {});
            for (int n = 1; n <= 10 && pre.L > 0.0; ++n) grid.push_back(2.0 * n * pre.L);
            return json_to_py(jn_report_to_json(s, verify_jn(problem, fam, b0, params, grid)));
        },
        py::arg("space"), py::arg("f"), py::arg("rho") = 2.0, py::arg("lambda_spec") = "fit:1");
}
