#include "kato/contour.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kato/errors.hpp"

namespace kato {

Mesh::Mesh(std::vector<Complex> points, bool closed)
    : points_(std::move(points)), closed_(closed) {
    if (points_.size() < 2) {
        throw UsageError("Mesh: need at least two points");
    }
    for (std::size_t j = 0; j + 1 < points_.size(); ++j) {
        if (points_[j] == points_[j + 1]) {
            throw UsageError("Mesh: consecutive points " + std::to_string(j) + " and " +
                             std::to_string(j + 1) + " coincide");
        }
    }
    if (closed_ && points_.back() != points_.front()) {
        throw UsageError("Mesh: closed mesh must end at its first point");
    }
}

Segment Mesh::segment(std::size_t j) const {
    if (j >= steps()) {
        throw UsageError("Mesh::segment: index " + std::to_string(j) + " out of range");
    }
    return Segment(points_[j], points_[j + 1]);
}

Mesh Mesh::reversed() const {
    return Mesh(std::vector<Complex>(points_.rbegin(), points_.rend()), closed_);
}

Mesh mesh_circle(Complex center, double radius, int steps) {
    if (steps < 3) {
        throw UsageError("mesh_circle: need at least 3 steps");
    }
    if (!(radius > 0.0)) {
        throw UsageError("mesh_circle: radius must be positive");
    }
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(steps) + 1);
    for (int j = 0; j < steps; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / steps;
        pts.push_back(center + std::polar(radius, theta));
    }
    pts.push_back(pts.front());
    return Mesh(std::move(pts), true);
}

Mesh mesh_polyline(std::span<const Complex> vertices, int steps_per_edge) {
    if (vertices.size() < 2) {
        throw UsageError("mesh_polyline: need at least two vertices");
    }
    if (steps_per_edge < 1) {
        throw UsageError("mesh_polyline: need at least one step per edge");
    }
    const bool closed = vertices.front() == vertices.back();
    if (closed && vertices.size() < 3) {
        throw UsageError("mesh_polyline: a closed polyline needs at least two edges");
    }
    std::vector<Complex> pts;
    for (std::size_t e = 0; e + 1 < vertices.size(); ++e) {
        const Complex a = vertices[e];
        const Complex b = vertices[e + 1];
        for (int i = 0; i < steps_per_edge; ++i) {
            pts.push_back(i == 0 ? a : a + (static_cast<double>(i) / steps_per_edge) * (b - a));
        }
    }
    pts.push_back(vertices.back());
    return Mesh(std::move(pts), closed);
}

Complex fractional_point(const Mesh& mesh, std::size_t j, double frac) {
    if (frac < 0.0 || frac > 1.0) {
        throw UsageError("fractional_point: fraction outside [0, 1]");
    }
    return mesh.segment(j).point(frac);
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) {
        throw UsageError("contour: invalid number '" + std::string(text) + "'");
    }
    return value;
}

int parse_count(std::string_view text) {
    int value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw UsageError("contour: invalid step count '" + std::string(text) + "'");
    }
    return value;
}

Complex parse_point(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) {
        throw UsageError("contour: expected <re>,<im>, got '" + std::string(text) + "'");
    }
    return {parse_double(parts[0]), parse_double(parts[1])};
}

void write_point(std::ostream& out, Complex z) { out << z.real() << ',' << z.imag(); }

}  // namespace

ContourSpec ContourSpec::circle(Complex center, double radius, int steps) {
    if (steps < 3) {
        throw UsageError("circle contour: need at least 3 steps");
    }
    if (!(radius > 0.0)) {
        throw UsageError("circle contour: radius must be positive");
    }
    return ContourSpec(Circle{center, radius, steps});
}

ContourSpec ContourSpec::polyline(std::vector<Complex> vertices, int steps_per_edge) {
    if (vertices.size() < 2) {
        throw UsageError("polyline contour: need at least two vertices");
    }
    if (steps_per_edge < 1) {
        throw UsageError("polyline contour: need at least one step per edge");
    }
    return ContourSpec(Polyline{std::move(vertices), steps_per_edge});
}

ContourSpec ContourSpec::parse(std::string_view descriptor) {
    const auto fields = split(descriptor, ':');
    if (fields[0] == "circle" && fields.size() == 4) {
        return circle(parse_point(fields[1]), parse_double(fields[2]), parse_count(fields[3]));
    }
    if (fields[0] == "polyline" && fields.size() == 3) {
        std::vector<Complex> vertices;
        for (std::string_view v : split(fields[1], ';')) {
            vertices.push_back(parse_point(v));
        }
        return polyline(std::move(vertices), parse_count(fields[2]));
    }
    throw UsageError("invalid contour '" + std::string(descriptor) +
                     "'; expected circle:<re>,<im>:<radius>:<L> or "
                     "polyline:<re,im>;<re,im>;...:<L_per_edge>");
}

Mesh ContourSpec::mesh() const {
    if (const auto* c = std::get_if<Circle>(&shape_)) {
        return mesh_circle(c->center, c->radius, c->steps);
    }
    const auto& p = std::get<Polyline>(shape_);
    return mesh_polyline(p.vertices, p.steps_per_edge);
}

std::string ContourSpec::descriptor() const {
    std::ostringstream out;
    out.precision(17);
    if (const auto* c = std::get_if<Circle>(&shape_)) {
        out << "circle:";
        write_point(out, c->center);
        out << ':' << c->radius << ':' << c->steps;
        return out.str();
    }
    const auto& p = std::get<Polyline>(shape_);
    out << "polyline:";
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        if (i > 0) {
            out << ';';
        }
        write_point(out, p.vertices[i]);
    }
    out << ':' << p.steps_per_edge;
    return out.str();
}

int ContourSpec::steps_per_resolution_unit() const {
    if (std::holds_alternative<Circle>(shape_)) {
        return 1;
    }
    return static_cast<int>(std::get<Polyline>(shape_).vertices.size()) - 1;
}

int ContourSpec::resolution() const {
    if (const auto* c = std::get_if<Circle>(&shape_)) {
        return c->steps;
    }
    return std::get<Polyline>(shape_).steps_per_edge;
}

int ContourSpec::total_steps() const { return resolution() * steps_per_resolution_unit(); }

ContourSpec ContourSpec::with_resolution(int resolution) const {
    if (const auto* c = std::get_if<Circle>(&shape_)) {
        return circle(c->center, c->radius, resolution);
    }
    return polyline(std::get<Polyline>(shape_).vertices, resolution);
}

ContourSpec ContourSpec::refined(int factor) const {
    if (factor < 1) {
        throw UsageError("ContourSpec::refined: factor must be >= 1");
    }
    return with_resolution(resolution() * factor);
}

CMatrix auto_initial_basis(const ProjectorFamily& family, Complex lambda0) {
    const CMatrix p = family.eval(lambda0).matrix();
    const Eigen::ColPivHouseholderQR<CMatrix> qr(p);
    const auto k = static_cast<Eigen::Index>(family.rank());
    CMatrix picked(p.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
        picked.col(j) = p.col(qr.colsPermutation().indices()(j));
    }
    return orthonormalize(picked);
}

RunReport continue_basis(const ProjectorFamily& family, const SchemeSpec& scheme, const Mesh& mesh,
                         const CMatrix& r0, InitPolicy policy, const ContinueOptions& options) {
    const int k = family.rank();
    if (r0.rows() != family.dim() || r0.cols() != k) {
        throw UsageError("continue_basis: initial basis is " + std::to_string(r0.rows()) + "x" +
                         std::to_string(r0.cols()) + ", expected " +
                         std::to_string(family.dim()) + "x" + std::to_string(k));
    }
    if (!all_finite(r0)) {
        throw UsageError("continue_basis: initial basis has non-finite entries");
    }
    if (numerical_rank(r0, options.rank_tol) < k) {
        throw UsageError("continue_basis: initial basis is rank deficient");
    }

    RunReport report;
    ProjectorCache cache(family);
    StepContext ctx(cache, report.counters);

    const Complex lambda0 = mesh[0];
    const CMatrix& p0 = cache.get(lambda0, report.counters);
    CMatrix r = r0;
    if (policy == InitPolicy::Require) {
        const double gap = (p0 * r0 - r0).norm();
        if (gap > options.init_tol * (1.0 + r0.norm())) {
            std::ostringstream msg;
            msg << "initial basis is not in range P(lambda_0): ||P r0 - r0||_F = " << gap;
            throw InitNotInRange(msg.str());
        }
    } else {
        r = orthonormalize(p0 * r0);
    }

    auto record = [&](Complex lambda, const CMatrix& p, const CMatrix& frame) {
        const double drift = (p * frame - frame).norm();
        report.drift = std::max(report.drift, drift);
        report.max_relative_drift = std::max(report.max_relative_drift, drift / frame.norm());
        if (options.record_reorthonormalization) {
            const double corr = (orthonormalize(frame) - frame).norm();
            report.reorthonormalization = std::max(report.reorthonormalization.value_or(0.0), corr);
        }
        report.frames.push_back({lambda, frame});
    };

    report.frames.reserve(mesh.points().size());
    record(lambda0, p0, r);
    for (std::size_t j = 0; j < mesh.steps(); ++j) {
        const Segment seg = mesh.segment(j);
        ctx.begin_step();
        const double prev_norm = r.norm();
        r = advance(scheme, ctx, seg, r);
        ctx.end_step();
        if (!all_finite(r)) {
            throw NonFiniteState("continue_basis: non-finite basis at step " + std::to_string(j + 1));
        }
        if (numerical_rank(r, options.rank_tol) < k || r.norm() <= options.rank_tol * prev_norm) {
            report.rank_ok = false;
            std::ostringstream msg;
            msg << "continue_basis: basis lost rank at lambda = " << mesh[j + 1] << " (step "
                << j + 1 << ")";
            throw RankCollapse(msg.str());
        }
        // Every scheme reads P at the chord end, so this is a cache hit.
        record(mesh[j + 1], cache.get(mesh[j + 1], report.counters), r);
    }
    if (mesh.closed()) {
        report.closure_error = (report.frames.back().r - report.frames.front().r).norm();
    }
    return report;
}

double closure_error(const RunReport& report) {
    if (!report.closure_error) {
        throw UsageError("closure_error: run was over an open mesh");
    }
    return *report.closure_error;
}

}  // namespace kato
