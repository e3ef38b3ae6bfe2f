#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kato/contour.hpp"
#include "kato/oracle.hpp"

namespace kato {

struct StudyRow {
    int steps = 0;                        // L
    std::optional<double> closure_error;  // closed contours only
    double oracle_error = 0.0;            // max_j ||R_j - R_j(oracle)||_F
    std::int64_t p_evals = 0;
    std::int64_t p_evals_fresh = 0;
    std::int64_t mat_mults = 0;
    std::optional<double> order;          // log2 of the oracle-error ratio to the previous row
    std::optional<double> closure_order;  // same for the closure error
};

struct StudyReport {
    std::vector<StudyRow> rows;
    std::optional<double> median_order;  // over rows that have an order
};

/// Runs `scheme` on base, 2x, 4x, ... refined versions of `contour`
/// (refinements + 1 levels) and compares every level with the RK4 oracle
/// on the same mesh. The fitted order of each level is
/// log2(oracle_error[prev] / oracle_error[this]).
StudyReport convergence_study(const ProjectorFamily& family, const SchemeSpec& scheme,
                              const ContourSpec& contour, int refinements,
                              const OracleConfig& oracle, const CMatrix& r0,
                              InitPolicy policy = InitPolicy::Require);

/// Smallest total step count, scanning resolutions 1, 2, ... of `contour`'s
/// shape up to max_steps, whose closure error is <= tolerance. r0 is chosen
/// with auto_initial_basis at the contour start. nullopt if none qualifies.
std::optional<int> steps_to_tolerance(const ProjectorFamily& family, const SchemeSpec& scheme,
                                      const ContourSpec& contour, double tolerance,
                                      int max_steps = 4096);

/// Median of the values; nullopt for an empty input.
std::optional<double> median(std::vector<double> values);

}  // namespace kato
