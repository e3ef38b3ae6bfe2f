#include <doctest.h>

#include "kato/contour.hpp"
#include "kato/errors.hpp"
#include "kato/study.hpp"

using namespace kato;

TEST_CASE("median") {
    CHECK_FALSE(median({}).has_value());
    CHECK(*median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(*median({4.0, 1.0, 3.0, 2.0}) == 2.5);
}

namespace {

StudyReport study(const char* id, const SchemeSpec& s, int per_edge, int refinements) {
    const ProblemSpec spec = make_problem(id);
    const ContourSpec contour = ContourSpec::parse(spec.suggested_contour).with_resolution(per_edge);
    const CMatrix r0 = auto_initial_basis(spec.family, contour.mesh()[0]);
    return convergence_study(spec.family, s, contour, refinements, OracleConfig{}, r0);
}

}  // namespace

TEST_CASE("convergence study rows") {
    const StudyReport rep = study("rank1", SchemeSpec::greedy1(), 4, 3);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.rows[0].steps == 16);
    CHECK(rep.rows[3].steps == 128);
    CHECK_FALSE(rep.rows[0].order.has_value());
    CHECK(rep.rows[1].order.has_value());
    CHECK(rep.rows[2].p_evals == 64);
    CHECK(rep.rows[2].mat_mults == 64);
    CHECK(rep.rows[2].closure_error.has_value());
    REQUIRE(rep.median_order.has_value());
    CHECK(*rep.median_order == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("measured orders") {
    CHECK(*study("rank1", SchemeSpec::greedy3(), 4, 3).median_order ==
          doctest::Approx(3.0).epsilon(0.15));
    CHECK(*study("random:1:4:2", SchemeSpec::greedy2(), 4, 3).median_order ==
          doctest::Approx(2.0).epsilon(0.15));
    CHECK(*study("random:1:4:2", SchemeSpec::parse("lift:greedy1"), 4, 3).median_order ==
          doctest::Approx(2.0).epsilon(0.15));
    CHECK(*study("evans-toy", SchemeSpec::brz1(), 4, 3).median_order ==
          doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("study argument checks") {
    CHECK_THROWS_AS(study("rank1", SchemeSpec::greedy1(), 4, 1), UsageError);
}

TEST_CASE("steps to tolerance") {
    const ProblemSpec spec = make_problem("rank1");
    const ContourSpec contour = ContourSpec::parse(spec.suggested_contour);
    const auto g1 = steps_to_tolerance(spec.family, SchemeSpec::greedy1(), contour, 1e-2);
    const auto g2 = steps_to_tolerance(spec.family, SchemeSpec::greedy2(), contour, 1e-2);
    REQUIRE(g1.has_value());
    REQUIRE(g2.has_value());
    CHECK(*g1 % 4 == 0);
    CHECK(*g1 >= 5 * *g2);
    CHECK_FALSE(steps_to_tolerance(spec.family, SchemeSpec::greedy1(), contour, 1e-9, 64).has_value());
}
