#include <doctest.h>

#include "kato/contour.hpp"
#include "kato/errors.hpp"
#include "kato/oracle.hpp"
#include "support.hpp"

using namespace kato;
using kato::test::rel_diff;

namespace {

Mesh open_segment(Complex a, Complex b, int steps) {
    const Complex ends[] = {a, b};
    return mesh_polyline(ends, steps);
}

}  // namespace

TEST_CASE("oracle on a constant family") {
    const CMatrix p0 = from_rows({{1.0, 0.5}, {0.0, 0.0}});
    const ProjectorFamily f = family_constant(p0, 1).family;
    const CMatrix r0 = from_rows({{1.0}, {0.0}});
    for (const BasisFrame& fr : integrate_kato(f, mesh_circle(0.0, 3.0, 8), r0)) {
        CHECK(fr.r == r0);
    }
    const Prop1Report rep = verify_prop1(f, mesh_circle(0.0, 3.0, 8), r0);
    CHECK(rep.pr_minus_r == 0.0);
    CHECK(rep.p_rprime == 0.0);
    CHECK(rep.kato_vs_reduced == 0.0);
    CHECK(rep.rank_constant);
}

TEST_CASE("oracle on moebius keeps e1 fixed") {
    const ProjectorFamily f = family_moebius().family;
    const CMatrix r0 = from_rows({{1.0}, {0.0}});
    for (const BasisFrame& fr : integrate_kato(f, mesh_circle(0.0, 1.0, 16), r0)) {
        CHECK(rel_diff(fr.r, r0) < 1e-12);
    }
}

TEST_CASE("RK4 self-convergence is fourth order") {
    const ProjectorFamily f = family_rank1().family;
    const Mesh mesh = open_segment(0.0, Complex(0.5, 0.2), 1);
    const CMatrix r0 = from_rows({{1.0}, {0.0}});
    auto end = [&](int substeps) {
        OracleConfig cfg;
        cfg.substeps_per_segment = substeps;
        return integrate_kato(f, mesh, r0, cfg).back().r;
    };
    const double ratio = (end(2) - end(4)).norm() / (end(4) - end(8)).norm();
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("full and reduced equations agree for bases in range") {
    for (const char* id : {"rank1", "random:1:4:2", "evans-toy"}) {
        CAPTURE(id);
        const ProblemSpec spec = make_problem(id);
        const Mesh mesh = ContourSpec::parse(spec.suggested_contour).with_resolution(4).mesh();
        const CMatrix r0 = auto_initial_basis(spec.family, mesh[0]);
        const auto full = integrate_kato(spec.family, mesh, r0);
        const auto reduced = integrate_reduced_kato(spec.family, mesh, r0);
        CHECK(rel_diff(full.back().r, reduced.back().r) < 1e-8);
        CHECK(rel_diff(full.back().r, r0) < 1e-8);
    }
}

TEST_CASE("negative control: equations disagree off the range") {
    const ProjectorFamily f = family_rank1().family;
    const Mesh mesh = open_segment(0.0, 0.5, 4);
    const CMatrix r0 = from_rows({{0.0}, {1.0}});
    const double gap =
        (integrate_kato(f, mesh, r0).back().r - integrate_reduced_kato(f, mesh, r0).back().r).norm();
    CHECK(gap >= 1e-3);
    CHECK_THROWS_AS(verify_prop1(f, mesh, r0), InitNotInRange);
}

TEST_CASE("reduced-equation residuals shrink under substep doubling") {
    const ProblemSpec spec = make_problem("random:1:4:2");
    const Mesh mesh = ContourSpec::parse(spec.suggested_contour).with_resolution(1).mesh();
    const CMatrix r0 = auto_initial_basis(spec.family, mesh[0]);
    OracleConfig coarse;
    coarse.substeps_per_segment = 64;
    OracleConfig fine;
    fine.substeps_per_segment = 128;
    const Prop1Report a = verify_prop1(spec.family, mesh, r0, coarse);
    const Prop1Report b = verify_prop1(spec.family, mesh, r0, fine);
    CHECK(a.pr_minus_r <= 1e-7);
    CHECK(b.pr_minus_r * 8.0 <= a.pr_minus_r);
    CHECK(a.rank_constant);
}

TEST_CASE("derivative checks") {
    SeededSource src(11);
    std::vector<Complex> pts;
    for (int i = 0; i < 16; ++i) {
        pts.push_back(Complex(0.6 * src.symmetric(), 0.6 * src.symmetric()));
    }
    CHECK(check_pprop(family_moebius().family, pts) <= 1e-15);
    CHECK(check_pprop(family_rank1().family, pts) <= 1e-12);
    CHECK(check_product_rule(family_rank1().family, pts) <= 1e-12);

    OracleConfig fd;
    fd.derivative_mode = DerivativeMode::CentralFD;
    CHECK(check_pprop(family_rank1().family, pts, fd) <= 1e-6);

    OracleConfig exact;
    exact.derivative_mode = DerivativeMode::Exact;
    CHECK_THROWS_AS(oracle_derivative(family_evans_toy().family, 1.0, 1.0, exact), UsageError);
    const CMatrix d = oracle_derivative(family_evans_toy().family, 1.0, 1.0, OracleConfig{});
    // Closed form at lambda = 1: 1/2 [[0, 1/2], [-1/2, 0]].
    CHECK(rel_diff(d, from_rows({{0.0, 0.25}, {-0.25, 0.0}})) < 1e-8);
}
