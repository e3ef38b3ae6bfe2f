#include <doctest.h>

#include <cmath>

#include "kato/errors.hpp"
#include "kato/oracle.hpp"
#include "kato/problems.hpp"
#include "support.hpp"

using namespace kato;
using kato::test::rel_diff;

TEST_CASE("moebius family") {
    const ProblemSpec spec = family_moebius();
    const ProjectorFamily& f = spec.family;
    CHECK(f.dim() == 2);
    CHECK(f.rank() == 1);
    CHECK(f.eval(0.0).matrix() == from_rows({{1.0, 0.0}, {0.0, 0.0}}));
    CHECK(f.eval(0.1).matrix() * from_rows({{1.0}, {0.0}}) == from_rows({{1.0}, {0.0}}));
    const CMatrix p = f.eval(Complex(1, 2)).matrix();
    CHECK((p * p - p).norm() == 0.0);
    CHECK(f.derivative(Complex(3, -1)) == from_rows({{0.0, -1.0}, {0.0, 0.0}}));
}

TEST_CASE("rank1 family") {
    const ProjectorFamily f = family_rank1().family;
    CHECK(rel_diff(f.eval(0.0).matrix(), from_rows({{1.0, 0.0}, {0.0, 0.0}})) == 0.0);
    // 1 / (1 + 0.25) = 0.8
    CHECK(rel_diff(f.eval(0.5).matrix(), from_rows({{0.8, 0.4}, {0.4, 0.2}})) < 1e-15);
    CHECK_THROWS_AS(f.eval(Complex(0, 1)), DomainViolation);
    CHECK_THROWS_AS(f.eval(Complex(0, -1)), DomainViolation);
    CHECK_THROWS_AS(f.eval(2.0), DomainViolation);
    // Bilinear, not Hermitian: P(lambda) is symmetric but not self-adjoint off the real axis.
    const CMatrix p = f.eval(Complex(0.2, 0.3)).matrix();
    CHECK((p - p.transpose()).norm() < 1e-15);
    CHECK((p - p.adjoint()).norm() > 0.1);
}

TEST_CASE("evans-toy family") {
    const ProjectorFamily f = family_evans_toy().family;
    CHECK_FALSE(f.has_derivative());
    const CMatrix p1 = f.eval(1.0).matrix();
    const CMatrix stable_dir = from_rows({{1.0}, {-1.0}});
    const CMatrix along = from_rows({{1.0}, {1.0}});
    CHECK(rel_diff(p1 * stable_dir, stable_dir) < 1e-14);
    CHECK((p1 * along).norm() < 1e-14);

    const CMatrix p = f.eval(1.69).matrix();
    const CMatrix range = from_rows({{1.0}, {-1.3}});
    CHECK(rel_diff(p * range, range) < 1e-14);
    CHECK(numerical_rank(p, 1e-10) == 1);

    const CMatrix q = f.eval(Complex(1, 0.3)).matrix();
    CHECK((q * q - q).norm() <= 1e-10);

    CHECK_THROWS_AS(f.eval(Complex(-0.5, 0.0)), DomainViolation);
    CHECK_THROWS_AS(f.derivative(1.0), UsageError);
}

TEST_CASE("evans-toy finite-difference derivative against the closed form") {
    // Stable eigenvalue -s, s = sqrt(lambda): P = 1/2 [[1, -1/s], [-s, 1]],
    // P' = 1/2 [[0, 1/(2 s^3)], [-1/(2 s), 0]].
    const ProjectorFamily f = family_evans_toy().family;
    for (const Complex lambda : {Complex(1, 0), Complex(1.3, -0.4), Complex(0.6, 0.2)}) {
        const Complex s = std::sqrt(lambda);
        CMatrix closed(2, 2);
        closed << 0.5, -0.5 / s, -0.5 * s, 0.5;
        CHECK(rel_diff(f.eval(lambda).matrix(), closed) < 1e-13);
        CMatrix dclosed(2, 2);
        dclosed << 0.0, 0.25 / (s * s * s), -0.25 / s, 0.0;
        const CMatrix fd = f.derivative_or_fd(lambda, Complex(0.6, 0.8));
        CHECK(rel_diff(fd, dclosed) < 1e-8);
    }
}

TEST_CASE("random analytic family") {
    const ProblemSpec spec = family_random_analytic(1, 4, 2);
    const ProjectorFamily& f = spec.family;
    CHECK(spec.id == "random:1:4:2");
    CHECK(numerical_rank(f.eval(0.0).matrix(), 1e-10) == 2);
    REQUIRE(f.domain().kind == Domain::Kind::Disk);
    CHECK(f.domain().radius > 0.1);
    CHECK_THROWS_AS(f.eval(1.01 * f.domain().radius), DomainViolation);

    SUBCASE("exact derivative has the O(h^2) central-difference slope") {
        const Complex lambda = 0.3 * f.domain().radius * Complex(0.6, 0.8);
        const CMatrix exact = f.derivative(lambda);
        const double e3 = (f.derivative_fd(lambda, 1.0, 1e-3) - exact).norm();
        const double e4 = (f.derivative_fd(lambda, 1.0, 1e-4) - exact).norm();
        CHECK(std::log10(e3 / e4) == doctest::Approx(2.0).epsilon(0.1));
    }
    SUBCASE("same seed gives a bitwise identical family") {
        const ProjectorFamily g = family_random_analytic(1, 4, 2).family;
        for (const Complex z : {Complex(0.0, 0.0), Complex(0.05, -0.02), Complex(-0.1, 0.07)}) {
            CHECK(f.eval(z).matrix() == g.eval(z).matrix());
            CHECK(f.derivative(z) == g.derivative(z));
        }
        CHECK(family_random_analytic(2, 4, 2).family.eval(0.0).matrix() != f.eval(0.0).matrix());
    }
    SUBCASE("invalid shapes") {
        CHECK_THROWS_AS(family_random_analytic(1, 3, 3), UsageError);
        CHECK_THROWS_AS(family_random_analytic(1, 3, 0), UsageError);
    }
}

TEST_CASE("SeededSource is the standard 64-bit Mersenne Twister") {
    SeededSource a(7);
    SeededSource b(7);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.unit() == b.unit());
    }
    // The 10000th output of a default-constructed mt19937_64 is fixed by the standard.
    SeededSource src(5489);
    std::mt19937_64 check(5489);
    check.discard(9999);
    CHECK(check() == 9981545732273789042ULL);
    const double u = src.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}

TEST_CASE("family invariants on 32 domain samples") {
    std::vector<ProblemSpec> specs;
    specs.push_back(family_moebius());
    specs.push_back(family_rank1());
    specs.push_back(family_evans_toy());
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        specs.push_back(family_random_analytic(seed, 3 + static_cast<int>(seed), 2));
    }
    for (const ProblemSpec& spec : specs) {
        CAPTURE(spec.id);
        const ProjectorFamily& f = spec.family;
        SeededSource src(99);
        std::vector<Complex> samples;
        for (int i = 0; i < 32; ++i) {
            samples.push_back(f.sample_point(src));
        }
        for (const Complex z : samples) {
            const Projector p = f.eval(z);
            CHECK(p.idempotence_residual() <= 1e-10 * (1.0 + p.matrix().norm()));
            CHECK(numerical_rank(p.matrix(), 1e-10) == f.rank());
        }
        if (f.has_derivative()) {
            CHECK(check_pprop(f, samples) <= 1e-9);
            CHECK(check_product_rule(f, samples) <= 1e-9);
        }
    }
}

TEST_CASE("make_problem registry") {
    CHECK(make_problem("moebius").id == "moebius");
    CHECK(make_problem("rank1").id == "rank1");
    CHECK(make_problem("evans-toy").id == "evans-toy");
    CHECK(make_problem("random:3:5:2").family.dim() == 5);
    CHECK_THROWS_AS(make_problem("nosuch"), UsageError);
    CHECK_THROWS_AS(make_problem("random:1:4"), UsageError);
    CHECK_THROWS_AS(make_problem("random:x:4:2"), UsageError);
}

TEST_CASE("suggested contours stay inside the domain") {
    for (const char* id : {"moebius", "rank1", "evans-toy", "random:1:4:2", "random:5:6:3"}) {
        const ProblemSpec spec = make_problem(id);
        CAPTURE(id);
        // Square corners sit at sqrt(2) times the half-width from the centre.
        const Domain& d = spec.family.domain();
        if (d.kind == Domain::Kind::Disk) {
            CHECK(std::abs(spec.basepoint - d.center) < 0.75 * d.radius);
        }
        CHECK(spec.family.domain().contains(spec.basepoint));
    }
}
