#include "kato/problems.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kato/errors.hpp"

namespace kato {

bool Domain::contains(Complex lambda) const {
    return kind == Kind::Entire || std::abs(lambda - center) < radius;
}

double SeededSource::unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Complex SeededSource::complex_symmetric() {
    const double re = symmetric();
    const double im = symmetric();
    return {re, im};
}

CMatrix SeededSource::matrix(Eigen::Index rows, Eigen::Index cols) {
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = complex_symmetric();
        }
    }
    return m;
}

ProjectorFamily::ProjectorFamily(int dim, int rank, MatrixFn eval, std::optional<MatrixFn> deriv,
                                 Domain domain, std::string domain_note)
    : dim_(dim),
      rank_(rank),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      domain_(domain),
      domain_note_(std::move(domain_note)) {
    if (dim_ < 1 || rank_ < 0 || rank_ > dim_) {
        throw UsageError("ProjectorFamily: invalid dimension or rank");
    }
}

namespace {

void require_in_domain(const Domain& domain, Complex lambda, const std::string& note) {
    if (!domain.contains(lambda)) {
        std::ostringstream msg;
        msg << "lambda = " << lambda << " lies outside the family's domain (" << note << ")";
        throw DomainViolation(msg.str());
    }
}

}  // namespace

Projector ProjectorFamily::eval(Complex lambda) const {
    require_in_domain(domain_, lambda, domain_note_);
    return Projector(eval_(lambda), rank_);
}

CMatrix ProjectorFamily::derivative(Complex lambda) const {
    if (!deriv_) {
        throw UsageError("family has no exact derivative");
    }
    require_in_domain(domain_, lambda, domain_note_);
    return (*deriv_)(lambda);
}

CMatrix ProjectorFamily::derivative_fd(Complex lambda, Complex dir, double h) const {
    const Complex step = h * dir;
    const CMatrix forward = eval(lambda + step).matrix();
    const CMatrix backward = eval(lambda - step).matrix();
    return (forward - backward) / (2.0 * step);
}

CMatrix ProjectorFamily::derivative_or_fd(Complex lambda, Complex dir) const {
    if (deriv_) {
        return derivative(lambda);
    }
    return derivative_fd(lambda, dir, 1e-6 * (1.0 + std::abs(lambda)));
}

Complex ProjectorFamily::sample_point(SeededSource& source, double fraction) const {
    const Complex center = domain_.kind == Domain::Kind::Disk ? domain_.center : Complex{};
    const double radius = fraction * (domain_.kind == Domain::Kind::Disk ? domain_.radius : 2.0);
    const double r = radius * std::sqrt(source.unit());
    const double theta = 2.0 * std::numbers::pi * source.unit();
    return center + std::polar(r, theta);
}

std::string square_contour(Complex center, double half_width, int steps_per_edge) {
    const Complex corners[] = {
        center + half_width * Complex(1.0, -1.0),
        center + half_width * Complex(1.0, 1.0),
        center + half_width * Complex(-1.0, 1.0),
        center + half_width * Complex(-1.0, -1.0),
    };
    std::ostringstream out;
    out.precision(17);
    out << "polyline:";
    for (const Complex& c : corners) {
        out << c.real() << ',' << c.imag() << ';';
    }
    out << corners[0].real() << ',' << corners[0].imag() << ':' << steps_per_edge;
    return out.str();
}

ProblemSpec family_moebius() {
    auto eval = [](Complex lambda) {
        CMatrix p = CMatrix::Zero(2, 2);
        p(0, 0) = 1.0;
        p(0, 1) = -lambda;
        return p;
    };
    auto deriv = [](Complex) {
        CMatrix d = CMatrix::Zero(2, 2);
        d(0, 1) = -1.0;
        return d;
    };
    ProjectorFamily family(2, 1, eval, deriv, Domain::entire(), "entire");
    const Complex center{0.0, 0.0};
    return {"moebius", std::move(family), center + 1.0 * Complex(1.0, -1.0),
            square_contour(center, 1.0, kSuggestedStepsPerEdge)};
}

ProblemSpec family_rank1() {
    auto eval = [](Complex lambda) {
        Eigen::Vector2cd v(1.0, lambda);
        return CMatrix(v * v.transpose() / (1.0 + lambda * lambda));
    };
    auto deriv = [](Complex lambda) {
        const Complex s = 1.0 + lambda * lambda;
        Eigen::Vector2cd v(1.0, lambda);
        Eigen::Vector2cd dv(0.0, 1.0);
        return CMatrix((dv * v.transpose() + v * dv.transpose()) / s -
                       (2.0 * lambda / (s * s)) * (v * v.transpose()));
    };
    ProjectorFamily family(2, 1, eval, deriv, Domain::disk({0.0, 0.0}, 1.0),
                           "|lambda| < 1; poles at lambda = +-i");
    const Complex center{0.0, 0.0};
    return {"rank1", std::move(family), center + 0.5 * Complex(1.0, -1.0),
            square_contour(center, 0.5, kSuggestedStepsPerEdge)};
}

ProblemSpec family_evans_toy() {
    auto eval = [](Complex lambda) {
        CMatrix a(2, 2);
        a << 0.0, 1.0, lambda, 0.0;
        return stable_projector(a, SpectralHalf::Stable).matrix();
    };
    ProjectorFamily family(2, 1, eval, std::nullopt, Domain::disk({1.0, 0.0}, 1.0),
                           "|lambda - 1| < 1; eigenvalues +-sqrt(lambda) meet the "
                           "imaginary axis on lambda <= 0");
    const Complex center{1.0, 0.0};
    return {"evans-toy", std::move(family), center + 0.5 * Complex(1.0, -1.0),
            square_contour(center, 0.5, kSuggestedStepsPerEdge)};
}

ProblemSpec family_random_analytic(std::uint64_t seed, int n, int k) {
    if (n < 2 || k < 1 || k >= n) {
        throw UsageError("family_random_analytic: need 1 <= k < n");
    }
    SeededSource source(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CMatrix m0;
    double sigma_min = 0.0;
    constexpr int kMaxAttempts = 1000;
    for (int attempt = 0;; ++attempt) {
        if (attempt == kMaxAttempts) {
            throw NumericalError("family_random_analytic: no well-conditioned M0 found");
        }
        m0 = identity(n) + 0.5 * scale * source.matrix(n, n);
        const Eigen::JacobiSVD<CMatrix> svd(m0);
        const auto& sv = svd.singularValues();
        sigma_min = sv(n - 1);
        if (sigma_min > 0.0 && sv(0) / sigma_min < 10.0) {
            break;
        }
    }
    const CMatrix m1 = 0.5 * scale * source.matrix(n, n);
    const CMatrix m2 = 0.25 * scale * source.matrix(n, n);

    // ||lambda M1 + lambda^2 M2||_2 < sigma_min(M0) keeps M invertible.
    const double a = Eigen::JacobiSVD<CMatrix>(m1).singularValues()(0);
    const double b = Eigen::JacobiSVD<CMatrix>(m2).singularValues()(0);
    const double radius = 2.0 * sigma_min / (a + std::sqrt(a * a + 4.0 * b * sigma_min));

    auto eval = [m0, m1, m2, k](Complex lambda) {
        const CMatrix m = m0 + lambda * m1 + lambda * lambda * m2;
        const CMatrix m_inv = solve(m, identity(m.rows()));
        return CMatrix(m.leftCols(k) * m_inv.topRows(k));
    };
    // P' = M' D M^{-1} - P M' M^{-1}, from (M^{-1})' = -M^{-1} M' M^{-1}.
    auto deriv = [m0, m1, m2, k](Complex lambda) {
        const CMatrix m = m0 + lambda * m1 + lambda * lambda * m2;
        const CMatrix dm = m1 + 2.0 * lambda * m2;
        const CMatrix m_inv = solve(m, identity(m.rows()));
        const CMatrix p = m.leftCols(k) * m_inv.topRows(k);
        return CMatrix(dm.leftCols(k) * m_inv.topRows(k) - p * dm * m_inv);
    };
    std::ostringstream note;
    note.precision(17);
    note << "|lambda| < " << radius << " keeps M(lambda) invertible";
    ProjectorFamily family(n, k, eval, deriv, Domain::disk({0.0, 0.0}, radius), note.str());

    std::ostringstream id;
    id << "random:" << seed << ':' << n << ':' << k;
    const Complex center{0.0, 0.0};
    const double half_width = 0.5 * radius;
    return {id.str(), std::move(family), center + half_width * Complex(1.0, -1.0),
            square_contour(center, half_width, kSuggestedStepsPerEdge)};
}

ProblemSpec family_constant(const CMatrix& p, int rank) {
    const Projector checked(p, rank);
    const CMatrix value = checked.matrix();
    auto eval = [value](Complex) { return value; };
    auto deriv = [value](Complex) { return CMatrix(CMatrix::Zero(value.rows(), value.cols())); };
    ProjectorFamily family(static_cast<int>(value.rows()), rank, eval, deriv, Domain::entire(),
                           "entire");
    const Complex center{0.0, 0.0};
    return {"constant", std::move(family), center + Complex(1.0, -1.0),
            square_contour(center, 1.0, kSuggestedStepsPerEdge)};
}

std::vector<std::string> problem_ids() {
    return {"moebius", "rank1", "evans-toy", "random:<seed>:<n>:<k>"};
}

namespace {

template <typename Int>
Int parse_int(std::string_view text, std::string_view what) {
    Int value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

ProblemSpec make_problem(std::string_view id) {
    if (id == "moebius") {
        return family_moebius();
    }
    if (id == "rank1") {
        return family_rank1();
    }
    if (id == "evans-toy") {
        return family_evans_toy();
    }
    constexpr std::string_view prefix = "random:";
    if (id.substr(0, prefix.size()) == prefix) {
        std::string_view rest = id.substr(prefix.size());
        const auto c1 = rest.find(':');
        const auto c2 = c1 == std::string_view::npos ? c1 : rest.find(':', c1 + 1);
        if (c2 == std::string_view::npos) {
            throw UsageError("random problem id must be random:<seed>:<n>:<k>");
        }
        const auto seed = parse_int<std::uint64_t>(rest.substr(0, c1), "seed");
        const auto n = parse_int<int>(rest.substr(c1 + 1, c2 - c1 - 1), "dimension");
        const auto k = parse_int<int>(rest.substr(c2 + 1), "rank");
        return family_random_analytic(seed, n, k);
    }
    throw UsageError("unknown problem '" + std::string(id) +
                     "'; known: moebius, rank1, evans-toy, random:<seed>:<n>:<k>");
}

}  // namespace kato
