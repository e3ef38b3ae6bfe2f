#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kato/contour.hpp"
#include "kato/errors.hpp"
#include "kato/oracle.hpp"
#include "kato/problems.hpp"
#include "kato/schemes.hpp"
#include "kato/study.hpp"

namespace kato::cli {

namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
    std::string problem_id;
    std::string scheme_id = "greedy1";
    std::string contour;  // empty: the problem's suggested contour
    std::string r0_file;  // empty: auto basis of range P(lambda_0)
    std::string init_policy = "require";
    std::string format = "json";
    std::string out_path;
    int oracle_substeps = 64;
    int refinements = 4;
    std::optional<double> tolerance;
    std::string baseline = "greedy1";
    bool frames = false;
};

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const CMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(complex_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// CSV fields reuse the JSON number text, so both formats carry the same digits.
std::string csv_field(const Json& value) { return value.is_null() ? std::string() : value.dump(); }

std::string csv_row(std::initializer_list<Json> fields) {
    std::string line;
    bool first = true;
    for (const Json& f : fields) {
        if (!first) {
            line += ',';
        }
        line += csv_field(f);
        first = false;
    }
    return line + '\n';
}

InitPolicy parse_policy(const std::string& text) {
    if (text == "require") {
        return InitPolicy::Require;
    }
    if (text == "project") {
        return InitPolicy::Project;
    }
    throw UsageError("--init-policy must be require or project");
}

/// First line "n k", then n rows of k "re,im" tokens.
CMatrix read_r0_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open r0 file '" + path + "'");
    }
    long n = 0;
    long k = 0;
    if (!(in >> n >> k) || n < 1 || k < 1) {
        throw UsageError("r0 file: first line must be 'n k' with positive integers");
    }
    CMatrix r(n, k);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < k; ++j) {
            std::string token;
            if (!(in >> token)) {
                throw UsageError("r0 file: expected " + std::to_string(n * k) + " entries");
            }
            const auto comma = token.find(',');
            if (comma == std::string::npos) {
                throw UsageError("r0 file: entry '" + token + "' is not re,im");
            }
            try {
                std::size_t used_re = 0;
                std::size_t used_im = 0;
                const std::string re = token.substr(0, comma);
                const std::string im = token.substr(comma + 1);
                const double x = std::stod(re, &used_re);
                const double y = std::stod(im, &used_im);
                if (used_re != re.size() || used_im != im.size()) {
                    throw std::invalid_argument(token);
                }
                r(i, j) = {x, y};
            } catch (const std::logic_error&) {
                throw UsageError("r0 file: entry '" + token + "' is not re,im");
            }
        }
    }
    std::string extra;
    if (in >> extra) {
        throw UsageError("r0 file: trailing data '" + extra + "'");
    }
    if (!all_finite(r)) {
        throw UsageError("r0 file: non-finite entry");
    }
    return r;
}

struct Setup {
    ProblemSpec problem;
    ContourSpec contour;
    Mesh mesh;
};

Setup make_setup(const RunConfig& cfg, std::optional<int> default_steps_per_edge) {
    ProblemSpec problem = make_problem(cfg.problem_id);
    ContourSpec contour = ContourSpec::parse(problem.suggested_contour);
    if (!cfg.contour.empty()) {
        contour = ContourSpec::parse(cfg.contour);
    } else if (default_steps_per_edge) {
        contour = contour.with_resolution(*default_steps_per_edge);
    }
    Mesh mesh = contour.mesh();
    return {std::move(problem), std::move(contour), std::move(mesh)};
}

CMatrix initial_basis(const RunConfig& cfg, const Setup& setup) {
    if (!cfg.r0_file.empty()) {
        return read_r0_file(cfg.r0_file);
    }
    return auto_initial_basis(setup.problem.family, setup.mesh[0]);
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) {
        throw UsageError("cannot write '" + cfg.out_path + "'");
    }
    file << text;
}

std::string render(const RunConfig& cfg, const Json& report, const std::string& csv) {
    if (cfg.format == "csv") {
        return csv;
    }
    return report.dump(2) + '\n';
}

int cmd_list(std::ostream& out) {
    out << "problems:\n";
    for (const std::string& id : problem_ids()) {
        if (id.find('<') != std::string::npos) {
            out << "  " << id << " dim=<n> rank=<k> derivative=exact\n";
            continue;
        }
        const ProblemSpec p = make_problem(id);
        out << "  " << p.id << " dim=" << p.family.dim() << " rank=" << p.family.rank()
            << " derivative=" << (p.family.has_derivative() ? "exact" : "central-fd")
            << " contour=" << p.suggested_contour << '\n';
    }
    out << "schemes:\n";
    for (const SchemeSpec& s : builtin_schemes()) {
        out << "  " << s.id() << " order=" << s.nominal_order() << " cost=" << s.cost_signature()
            << '\n';
    }
    out << "  lift:<scheme> order=<base order + 1> cost=<3x base multiplications>"
        << " (orders up to " << kMaxCliOrder << ")\n";
    return kExitOk;
}

int cmd_continue(const RunConfig& cfg, std::ostream& out) {
    const SchemeSpec scheme = SchemeSpec::parse(cfg.scheme_id, kMaxCliOrder);
    const InitPolicy policy = parse_policy(cfg.init_policy);
    const Setup setup = make_setup(cfg, std::nullopt);
    const CMatrix r0 = initial_basis(cfg, setup);
    const RunReport run = continue_basis(setup.problem.family, scheme, setup.mesh, r0, policy);

    Json report;
    report["schema"] = 1;
    report["command"] = "continue";
    report["problem"] = setup.problem.id;
    report["scheme"] = scheme.id();
    report["order"] = scheme.nominal_order();
    report["contour"] = setup.contour.descriptor();
    report["n"] = setup.problem.family.dim();
    report["k"] = setup.problem.family.rank();
    report["L"] = setup.mesh.steps();
    report["closure_error"] = number(run.closure_error);
    report["drift"] = number(run.drift);
    report["max_relative_drift"] = number(run.max_relative_drift);
    report["rank_ok"] = run.rank_ok;
    report["counters"] = {{"p_evals", run.counters.p_evals},
                          {"p_evals_fresh", run.counters.p_evals_fresh},
                          {"mat_mults", run.counters.mat_mults},
                          {"steps", run.counters.steps}};
    report["initial_basis"] = matrix_json(run.frames.front().r);
    report["final_basis"] = matrix_json(run.frames.back().r);
    if (cfg.frames) {
        Json frames = Json::array();
        for (const BasisFrame& f : run.frames) {
            frames.push_back({{"lambda", complex_json(f.lambda)}, {"r", matrix_json(f.r)}});
        }
        report["frames"] = std::move(frames);
    }

    std::string csv = "L,closure_error,drift,rank_ok,p_evals,p_evals_fresh,mat_mults\n";
    csv += csv_row({report["L"], report["closure_error"], report["drift"], report["rank_ok"],
                    report["counters"]["p_evals"], report["counters"]["p_evals_fresh"],
                    report["counters"]["mat_mults"]});
    emit(cfg, render(cfg, report, csv), out);
    return kExitOk;
}

int cmd_study(const RunConfig& cfg, std::ostream& out) {
    const SchemeSpec scheme = SchemeSpec::parse(cfg.scheme_id, kMaxCliOrder);
    const InitPolicy policy = parse_policy(cfg.init_policy);
    const Setup setup = make_setup(cfg, kStudyStepsPerEdge);
    const CMatrix r0 = initial_basis(cfg, setup);
    OracleConfig oracle;
    oracle.substeps_per_segment = cfg.oracle_substeps;
    const StudyReport study = convergence_study(setup.problem.family, scheme, setup.contour,
                                                cfg.refinements, oracle, r0, policy);

    Json report;
    report["schema"] = 1;
    report["command"] = "study";
    report["problem"] = setup.problem.id;
    report["scheme"] = scheme.id();
    report["nominal_order"] = scheme.nominal_order();
    report["contour"] = setup.contour.descriptor();
    report["refinements"] = cfg.refinements;
    report["oracle_substeps"] = cfg.oracle_substeps;
    Json rows = Json::array();
    std::string csv = "L,closure_error,oracle_error,p_evals,mat_mults,order\n";
    for (const StudyRow& row : study.rows) {
        Json r;
        r["L"] = row.steps;
        r["closure_error"] = number(row.closure_error);
        r["oracle_error"] = number(row.oracle_error);
        r["p_evals"] = row.p_evals;
        r["mat_mults"] = row.mat_mults;
        r["order"] = number(row.order);
        r["p_evals_fresh"] = row.p_evals_fresh;
        r["closure_order"] = number(row.closure_order);
        csv += csv_row({r["L"], r["closure_error"], r["oracle_error"], r["p_evals"],
                        r["mat_mults"], r["order"]});
        rows.push_back(std::move(r));
    }
    report["rows"] = std::move(rows);
    report["median_order"] = number(study.median_order);
    csv += "median,,,,," + csv_field(report["median_order"]) + '\n';

    if (cfg.tolerance) {
        const SchemeSpec baseline = SchemeSpec::parse(cfg.baseline, kMaxCliOrder);
        Json steps;
        for (const SchemeSpec& s : {scheme, baseline}) {
            const auto n = steps_to_tolerance(setup.problem.family, s, setup.contour, *cfg.tolerance);
            steps[s.id()] = n ? Json(*n) : Json(nullptr);
            csv += "# steps_to_tolerance " + s.id() + ' ' + Json(*cfg.tolerance).dump() + ' ' +
                   (n ? std::to_string(*n) : std::string("none")) + '\n';
        }
        report["steps_to_tolerance"] = {{"tolerance", *cfg.tolerance}, {"steps", std::move(steps)}};
    }
    emit(cfg, render(cfg, report, csv), out);
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const Setup setup = make_setup(cfg, kVerifyStepsPerEdge);
    const ProjectorFamily& family = setup.problem.family;
    const CMatrix r0 = initial_basis(cfg, setup);
    OracleConfig oracle;
    oracle.substeps_per_segment = cfg.oracle_substeps;

    const Prop1Report prop1 = verify_prop1(family, setup.mesh, r0, oracle);
    SeededSource source(20090101);
    std::vector<Complex> samples;
    for (int i = 0; i < kVerifySamples; ++i) {
        samples.push_back(family.sample_point(source));
    }
    const double pprop = check_pprop(family, samples, oracle);
    const double product_rule = check_product_rule(family, samples, oracle);
    const double pprop_threshold =
        family.has_derivative() ? kPpropExactThreshold : kPpropFdThreshold;
    const bool pass = prop1.pr_minus_r <= kProp1Threshold && prop1.p_rprime <= kProp1Threshold &&
                      prop1.kato_vs_reduced <= kProp1Threshold && prop1.rank_constant &&
                      pprop <= pprop_threshold && product_rule <= pprop_threshold;

    Json report;
    report["schema"] = 1;
    report["command"] = "verify";
    report["problem"] = setup.problem.id;
    report["contour"] = setup.contour.descriptor();
    report["oracle_substeps"] = cfg.oracle_substeps;
    report["derivative"] = family.has_derivative() ? "exact" : "central-fd";
    report["prop1"] = {{"pr_minus_r", number(prop1.pr_minus_r)},
                       {"p_rprime", number(prop1.p_rprime)},
                       {"kato_vs_reduced", number(prop1.kato_vs_reduced)},
                       {"rank_constant", prop1.rank_constant}};
    report["pprop"] = number(pprop);
    report["product_rule"] = number(product_rule);
    report["samples"] = kVerifySamples;
    report["thresholds"] = {{"prop1", kProp1Threshold}, {"pprop", pprop_threshold}};
    report["pass"] = pass;

    std::string csv = "pr_minus_r,p_rprime,kato_vs_reduced,rank_constant,pprop,product_rule,pass\n";
    csv += csv_row({report["prop1"]["pr_minus_r"], report["prop1"]["p_rprime"],
                    report["prop1"]["kato_vs_reduced"], report["prop1"]["rank_constant"],
                    report["pprop"], report["product_rule"], report["pass"]});
    emit(cfg, render(cfg, report, csv), out);
    return pass ? kExitOk : kExitNumerical;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--problem", cfg.problem_id, "moebius, rank1, evans-toy or random:<seed>:<n>:<k>")
        ->required();
    sub->add_option("--contour", cfg.contour,
                    "circle:<re>,<im>:<radius>:<L> or polyline:<re,im>;...:<L_per_edge>");
    sub->add_option("--r0-file", cfg.r0_file, "initial basis file (default: auto basis)");
    sub->add_option("--init-policy", cfg.init_policy, "require or project")
        ->check(CLI::IsMember({"require", "project"}));
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out_path, "write the report here instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty()) {
        return cmd_list(out);
    }
    CLI::App app{"Continuation of analytic invariant-subspace bases along contours", "kato"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* list = app.add_subcommand("list", "list problems and schemes");

    CLI::App* cont = app.add_subcommand("continue", "continue a basis along a contour");
    add_common(cont, cfg);
    cont->add_option("--scheme", cfg.scheme_id, "greedy1, brz1, greedy2, rich2, rich3, greedy3, lift:<scheme>");
    cont->add_flag("--frames", cfg.frames, "include every frame in the JSON report");

    CLI::App* study = app.add_subcommand("study", "convergence study under dyadic refinement");
    add_common(study, cfg);
    study->add_option("--scheme", cfg.scheme_id, "scheme id");
    study->add_option("--refinements", cfg.refinements, "number of mesh doublings")
        ->check(CLI::Range(2, 12));
    study->add_option("--oracle-substeps", cfg.oracle_substeps, "RK4 substeps per mesh chord")
        ->check(CLI::Range(1, 1 << 16));
    study->add_option("--tolerance", cfg.tolerance, "also report steps needed to reach this closure error");
    study->add_option("--baseline", cfg.baseline, "second scheme for the steps-to-tolerance comparison");

    CLI::App* verify = app.add_subcommand("verify", "check Kato-equation properties of a family");
    add_common(verify, cfg);
    verify->add_option("--oracle-substeps", cfg.oracle_substeps, "RK4 substeps per mesh chord")
        ->check(CLI::Range(1, 1 << 16));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (list->parsed()) {
            return cmd_list(out);
        }
        if (cont->parsed()) {
            return cmd_continue(cfg, out);
        }
        if (study->parsed()) {
            return cmd_study(cfg, out);
        }
        if (verify->parsed()) {
            return cmd_verify(cfg, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        if (std::string(e.what()).find("unknown") != std::string::npos) {
            std::ostringstream listing;
            cmd_list(listing);
            err << listing.str();
        }
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace kato::cli
