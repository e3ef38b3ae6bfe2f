#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "kato/contour.hpp"
#include "kato/errors.hpp"
#include "kato/oracle.hpp"
#include "kato/study.hpp"

namespace py = pybind11;
using namespace kato;

namespace {

InitPolicy policy_from(const std::string& name) {
    if (name == "require") {
        return InitPolicy::Require;
    }
    if (name == "project") {
        return InitPolicy::Project;
    }
    throw UsageError("init_policy must be 'require' or 'project'");
}

ContourSpec contour_for(const ProblemSpec& spec, const std::optional<std::string>& contour) {
    return ContourSpec::parse(contour.value_or(spec.suggested_contour));
}

CMatrix basis_for(const ProblemSpec& spec, const Mesh& mesh, const std::optional<CMatrix>& r0) {
    return r0 ? *r0 : auto_initial_basis(spec.family, mesh[0]);
}

py::dict counters_dict(const CostCounters& c) {
    py::dict d;
    d["p_evals"] = c.p_evals;
    d["p_evals_fresh"] = c.p_evals_fresh;
    d["mat_mults"] = c.mat_mults;
    d["steps"] = c.steps;
    return d;
}

py::dict continue_py(const std::string& problem, const std::string& scheme,
                     const std::optional<std::string>& contour, const std::optional<CMatrix>& r0,
                     const std::string& init_policy) {
    const ProblemSpec spec = make_problem(problem);
    const Mesh mesh = contour_for(spec, contour).mesh();
    const RunReport run = continue_basis(spec.family, SchemeSpec::parse(scheme), mesh,
                                         basis_for(spec, mesh, r0), policy_from(init_policy));
    py::list lambdas;
    py::list bases;
    for (const BasisFrame& f : run.frames) {
        lambdas.append(f.lambda);
        bases.append(f.r);
    }
    py::dict out;
    out["lambdas"] = lambdas;
    out["bases"] = bases;
    out["closure_error"] = run.closure_error;
    out["drift"] = run.drift;
    out["max_relative_drift"] = run.max_relative_drift;
    out["rank_ok"] = run.rank_ok;
    out["counters"] = counters_dict(run.counters);
    return out;
}

py::dict study_py(const std::string& problem, const std::string& scheme,
                  const std::optional<std::string>& contour, int refinements, int oracle_substeps) {
    const ProblemSpec spec = make_problem(problem);
    const ContourSpec c = contour ? ContourSpec::parse(*contour)
                                  : ContourSpec::parse(spec.suggested_contour)
                                        .with_resolution(cli::kStudyStepsPerEdge);
    OracleConfig oracle;
    oracle.substeps_per_segment = oracle_substeps;
    const StudyReport rep = convergence_study(spec.family, SchemeSpec::parse(scheme), c, refinements,
                                              oracle, auto_initial_basis(spec.family, c.mesh()[0]));
    py::list rows;
    for (const StudyRow& r : rep.rows) {
        py::dict row;
        row["L"] = r.steps;
        row["closure_error"] = r.closure_error;
        row["oracle_error"] = r.oracle_error;
        row["p_evals"] = r.p_evals;
        row["p_evals_fresh"] = r.p_evals_fresh;
        row["mat_mults"] = r.mat_mults;
        row["order"] = r.order;
        row["closure_order"] = r.closure_order;
        rows.append(row);
    }
    py::dict out;
    out["rows"] = rows;
    out["median_order"] = rep.median_order;
    return out;
}

py::dict verify_py(const std::string& problem, const std::optional<std::string>& contour,
                   int oracle_substeps) {
    const ProblemSpec spec = make_problem(problem);
    const ContourSpec c = contour ? ContourSpec::parse(*contour)
                                  : ContourSpec::parse(spec.suggested_contour)
                                        .with_resolution(cli::kVerifyStepsPerEdge);
    const Mesh mesh = c.mesh();
    OracleConfig oracle;
    oracle.substeps_per_segment = oracle_substeps;
    const Prop1Report rep =
        verify_prop1(spec.family, mesh, auto_initial_basis(spec.family, mesh[0]), oracle);
    py::dict out;
    out["pr_minus_r"] = rep.pr_minus_r;
    out["p_rprime"] = rep.p_rprime;
    out["kato_vs_reduced"] = rep.kato_vs_reduced;
    out["rank_constant"] = rep.rank_constant;
    return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Analytic continuation of projector-range bases along contours.";

    auto base = py::register_exception<Error>(m, "KatoError", PyExc_RuntimeError);
    py::register_exception<UsageError>(m, "UsageError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    py::class_<ProblemSpec>(m, "Problem")
        .def_readonly("id", &ProblemSpec::id)
        .def_readonly("basepoint", &ProblemSpec::basepoint)
        .def_readonly("suggested_contour", &ProblemSpec::suggested_contour)
        .def_property_readonly("dim", [](const ProblemSpec& p) { return p.family.dim(); })
        .def_property_readonly("rank", [](const ProblemSpec& p) { return p.family.rank(); })
        .def_property_readonly("has_derivative",
                               [](const ProblemSpec& p) { return p.family.has_derivative(); })
        .def("projector", [](const ProblemSpec& p, Complex z) { return p.family.eval(z).matrix(); },
             py::arg("lam"))
        .def("derivative",
             [](const ProblemSpec& p, Complex z) { return p.family.derivative_or_fd(z, 1.0); },
             py::arg("lam"), "Exact derivative, or a central difference when none is known.")
        .def("initial_basis",
             [](const ProblemSpec& p, Complex z) { return auto_initial_basis(p.family, z); },
             py::arg("lam"));

    m.def("problem_ids", &problem_ids);
    m.def("make_problem", [](const std::string& id) { return make_problem(id); }, py::arg("id"));
    m.def("schemes", [] {
        std::vector<std::string> ids;
        for (const SchemeSpec& s : builtin_schemes()) {
            ids.push_back(s.id());
        }
        return ids;
    });
    m.def(
        "scheme_info",
        [](const std::string& id) {
            const SchemeSpec s = SchemeSpec::parse(id);
            py::dict d;
            d["id"] = s.id();
            d["order"] = s.nominal_order();
            d["cost"] = s.cost_signature();
            d["fractions"] = s.sample_fractions();
            return d;
        },
        py::arg("id"));

    m.def("continue_basis", &continue_py, py::arg("problem"), py::arg("scheme") = "greedy2",
          py::arg("contour") = py::none(), py::arg("r0") = py::none(),
          py::arg("init_policy") = "require");
    m.def("convergence_study", &study_py, py::arg("problem"), py::arg("scheme") = "greedy2",
          py::arg("contour") = py::none(), py::arg("refinements") = 4,
          py::arg("oracle_substeps") = 64);
    m.def("verify", &verify_py, py::arg("problem"), py::arg("contour") = py::none(),
          py::arg("oracle_substeps") = 64);
    m.def(
        "steps_to_tolerance",
        [](const std::string& problem, const std::string& scheme, double tolerance,
           const std::optional<std::string>& contour, int max_steps) {
            const ProblemSpec spec = make_problem(problem);
            return steps_to_tolerance(spec.family, SchemeSpec::parse(scheme),
                                      contour_for(spec, contour), tolerance, max_steps);
        },
        py::arg("problem"), py::arg("scheme"), py::arg("tolerance"), py::arg("contour") = py::none(),
        py::arg("max_steps") = 4096);
    m.def("run_cli", &run_cli, py::arg("args"), "Runs the command-line tool; returns (code, stdout, stderr).");
}
