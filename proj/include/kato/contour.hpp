#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kato/matrix.hpp"
#include "kato/problems.hpp"
#include "kato/schemes.hpp"

namespace kato {

/// Ordered sample points lambda_0..lambda_L. Consecutive points differ; a
/// closed mesh repeats lambda_0 bit for bit as its last point.
class Mesh {
public:
    Mesh(std::vector<Complex> points, bool closed);

    const std::vector<Complex>& points() const { return points_; }
    bool closed() const { return closed_; }
    /// Number of steps L (one less than the number of points).
    std::size_t steps() const { return points_.size() - 1; }
    Complex operator[](std::size_t j) const { return points_[j]; }
    /// Chord from lambda_j to lambda_{j+1}.
    Segment segment(std::size_t j) const;
    Mesh reversed() const;

private:
    std::vector<Complex> points_;
    bool closed_;
};

/// lambda_j = center + radius e^{2 pi i j / L}, j < L, closed.
Mesh mesh_circle(Complex center, double radius, int steps);

/// Each edge split into steps_per_edge equal chords. Closed when the last
/// vertex equals the first.
Mesh mesh_polyline(std::span<const Complex> vertices, int steps_per_edge);

/// lambda_j + frac (lambda_{j+1} - lambda_j), along the chord.
Complex fractional_point(const Mesh& mesh, std::size_t j, double frac);

/// Parsed contour descriptor:
///   circle:<center_re>,<center_im>:<radius>:<L>
///   polyline:<re,im>;<re,im>;...:<L_per_edge>
class ContourSpec {
public:
    struct Circle {
        Complex center;
        double radius;
        int steps;
    };
    struct Polyline {
        std::vector<Complex> vertices;
        int steps_per_edge;
    };

    static ContourSpec parse(std::string_view descriptor);
    static ContourSpec circle(Complex center, double radius, int steps);
    static ContourSpec polyline(std::vector<Complex> vertices, int steps_per_edge);

    Mesh mesh() const;
    std::string descriptor() const;
    int total_steps() const;
    /// Same shape with every step count multiplied by `factor`.
    ContourSpec refined(int factor) const;
    /// Same shape with the given resolution: L for circles, per-edge count
    /// for polylines.
    ContourSpec with_resolution(int resolution) const;
    /// Steps added per unit of resolution: 1 for circles, edge count for polylines.
    int steps_per_resolution_unit() const;
    int resolution() const;

private:
    explicit ContourSpec(std::variant<Circle, Polyline> shape) : shape_(std::move(shape)) {}

    std::variant<Circle, Polyline> shape_;
};

struct BasisFrame {
    Complex lambda;
    CMatrix r;
};

enum class InitPolicy {
    Require,  // r0 must already lie in range P(lambda_0)
    Project,  // replace r0 by orthonormalize(P(lambda_0) r0)
};

struct ContinueOptions {
    /// Require policy tolerance: ||P r0 - r0||_F <= init_tol * (1 + ||r0||_F).
    double init_tol = 1e-8;
    /// RankCollapse when numerical_rank(R_j, rank_tol) drops below k, or when
    /// ||R_j||_F falls below rank_tol ||R_{j-1}||_F (a uniform collapse).
    double rank_tol = 1e-8;
    /// Records max_j ||orthonormalize(R_j) - R_j||_F without applying it.
    bool record_reorthonormalization = false;
};

struct RunReport {
    std::vector<BasisFrame> frames;
    std::optional<double> closure_error;  // ||R_L - R_0||_F on closed meshes
    double drift = 0.0;                   // max_j ||P_j R_j - R_j||_F
    double max_relative_drift = 0.0;      // max_j ||P_j R_j - R_j||_F / ||R_j||_F
    bool rank_ok = true;
    CostCounters counters;
    std::optional<double> reorthonormalization;
};

/// Advances r0 along the mesh with `scheme`.
///
/// Throws InitNotInRange (Require policy, r0 outside the range of
/// P(lambda_0)), RankCollapse (a frame lost rank), NonFiniteState, and
/// whatever the family raises (DomainViolation, SpectralGapViolation).
RunReport continue_basis(const ProjectorFamily& family, const SchemeSpec& scheme, const Mesh& mesh,
                         const CMatrix& r0, InitPolicy policy, const ContinueOptions& options = {});

/// ||R_L - R_0||_F; UsageError for runs over open meshes.
double closure_error(const RunReport& report);

/// Orthonormal basis of range P(lambda_0), obtained by orthonormalising the
/// columns of P(lambda_0) in turn and keeping the first k independent ones.
CMatrix auto_initial_basis(const ProjectorFamily& family, Complex lambda0);

}  // namespace kato
