#include "kato/study.hpp"

#include <algorithm>
#include <cmath>

#include "kato/errors.hpp"

namespace kato {

namespace {

std::optional<double> log2_ratio(double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0)) {
        return std::nullopt;
    }
    return std::log2(coarse / fine);
}

}  // namespace

std::optional<double> median(std::vector<double> values) {
    if (values.empty()) {
        return std::nullopt;
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    return 0.5 * (values[mid - 1] + values[mid]);
}

StudyReport convergence_study(const ProjectorFamily& family, const SchemeSpec& scheme,
                              const ContourSpec& contour, int refinements,
                              const OracleConfig& oracle, const CMatrix& r0, InitPolicy policy) {
    if (refinements < 2) {
        throw UsageError("convergence_study: need at least 2 refinements");
    }
    StudyReport report;
    std::vector<double> orders;
    for (int level = 0; level <= refinements; ++level) {
        const Mesh mesh = contour.refined(1 << level).mesh();
        const RunReport run = continue_basis(family, scheme, mesh, r0, policy);
        const auto reference = integrate_kato(family, mesh, run.frames.front().r, oracle);

        StudyRow row;
        row.steps = static_cast<int>(mesh.steps());
        row.closure_error = run.closure_error;
        for (std::size_t j = 0; j < reference.size(); ++j) {
            row.oracle_error = std::max(row.oracle_error, (run.frames[j].r - reference[j].r).norm());
        }
        row.p_evals = run.counters.p_evals;
        row.p_evals_fresh = run.counters.p_evals_fresh;
        row.mat_mults = run.counters.mat_mults;
        if (!report.rows.empty()) {
            const StudyRow& prev = report.rows.back();
            row.order = log2_ratio(prev.oracle_error, row.oracle_error);
            if (prev.closure_error && row.closure_error) {
                row.closure_order = log2_ratio(*prev.closure_error, *row.closure_error);
            }
            if (row.order) {
                orders.push_back(*row.order);
            }
        }
        report.rows.push_back(row);
    }
    report.median_order = median(std::move(orders));
    return report;
}

std::optional<int> steps_to_tolerance(const ProjectorFamily& family, const SchemeSpec& scheme,
                                      const ContourSpec& contour, double tolerance,
                                      int max_steps) {
    const int unit = contour.steps_per_resolution_unit();
    const int first = unit == 1 ? 3 : 1;  // circles need three steps
    for (int res = first; res * unit <= max_steps; ++res) {
        const Mesh mesh = contour.with_resolution(res).mesh();
        if (!mesh.closed()) {
            throw UsageError("steps_to_tolerance: contour must be closed");
        }
        const CMatrix r0 = auto_initial_basis(family, mesh[0]);
        const RunReport run = continue_basis(family, scheme, mesh, r0, InitPolicy::Require);
        if (*run.closure_error <= tolerance) {
            return static_cast<int>(mesh.steps());
        }
    }
    return std::nullopt;
}

}  // namespace kato
