#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "kato/matrix.hpp"
#include "kato/spectral.hpp"

namespace kato {

/// Region on which a family is analytic. Evaluation outside raises
/// DomainViolation.
struct Domain {
    enum class Kind { Entire, Disk };

    Kind kind = Kind::Entire;
    Complex center{0.0, 0.0};
    double radius = 0.0;  // open disk; unused for Entire

    static Domain entire() { return {}; }
    static Domain disk(Complex center, double radius) { return {Kind::Disk, center, radius}; }

    bool contains(Complex lambda) const;
};

/// Portable seeded source. The 64-bit Mersenne Twister output sequence is
/// fixed by the C++ standard; values are mapped to doubles by taking the top
/// 53 bits, so a seed yields the same numbers on every conforming platform.
class SeededSource {
public:
    explicit SeededSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double unit();
    /// Uniform in [-1, 1).
    double symmetric() { return 2.0 * unit() - 1.0; }
    /// Real and imaginary parts independently uniform in [-1, 1).
    Complex complex_symmetric();
    /// rows x cols matrix with complex_symmetric() entries, row by row.
    CMatrix matrix(Eigen::Index rows, Eigen::Index cols);

private:
    std::mt19937_64 engine_;
};

/// The map lambda -> P(lambda), optionally with its exact derivative.
/// Immutable once built; evaluation is thread-safe.
class ProjectorFamily {
public:
    using MatrixFn = std::function<CMatrix(Complex)>;

    ProjectorFamily(int dim, int rank, MatrixFn eval, std::optional<MatrixFn> deriv,
                    Domain domain, std::string domain_note);

    int dim() const { return dim_; }
    int rank() const { return rank_; }
    const Domain& domain() const { return domain_; }
    const std::string& domain_note() const { return domain_note_; }
    bool has_derivative() const { return deriv_.has_value(); }

    Projector eval(Complex lambda) const;

    /// Exact P'(lambda); UsageError when the family has none.
    CMatrix derivative(Complex lambda) const;

    /// Central difference along the unit direction `dir`:
    /// (P(l + h dir) - P(l - h dir)) / (2 h dir). For analytic P this
    /// approximates P' whatever the direction.
    CMatrix derivative_fd(Complex lambda, Complex dir, double h) const;

    /// Exact derivative when available, otherwise derivative_fd with
    /// h = 1e-6 (1 + |lambda|).
    CMatrix derivative_or_fd(Complex lambda, Complex dir) const;

    /// A point drawn uniformly from the disk of `fraction` times the domain
    /// radius (radius 2 for entire families).
    Complex sample_point(SeededSource& source, double fraction = 0.9) const;

private:
    int dim_;
    int rank_;
    MatrixFn eval_;
    std::optional<MatrixFn> deriv_;
    Domain domain_;
    std::string domain_note_;
};

inline constexpr int kSuggestedStepsPerEdge = 64;

struct ProblemSpec {
    std::string id;
    ProjectorFamily family;
    Complex basepoint;
    /// Closed contour descriptor (see contour.hpp) lying inside the domain.
    std::string suggested_contour;
};

/// Descriptor of the closed axis-aligned square of half-width h about c,
/// starting at its lower-right corner, counter-clockwise.
std::string square_contour(Complex center, double half_width, int steps_per_edge);

/// P(lambda) = [[1, -lambda], [0, 0]]; entire.
ProblemSpec family_moebius();

/// P(lambda) = v v^T / (1 + lambda^2), v = (1, lambda); analytic on |lambda| < 1.
ProblemSpec family_rank1();

/// Stable spectral projector of A(lambda) = [[0, 1], [lambda, 0]];
/// analytic on |lambda - 1| < 1. No exact derivative.
ProblemSpec family_evans_toy();

/// P = M diag(I_k, 0) M^{-1} with M(lambda) = M0 + lambda M1 + lambda^2 M2
/// drawn from SeededSource(seed); cond(M0) < 10, domain radius chosen so M
/// stays invertible.
ProblemSpec family_random_analytic(std::uint64_t seed, int n, int k);

/// P(lambda) == p for every lambda (derivative zero).
ProblemSpec family_constant(const CMatrix& p, int rank);

/// Ids usable with make_problem; random families appear as the template
/// "random:<seed>:<n>:<k>".
std::vector<std::string> problem_ids();

/// "moebius", "rank1", "evans-toy" or "random:<seed>:<n>:<k>".
ProblemSpec make_problem(std::string_view id);

}  // namespace kato
