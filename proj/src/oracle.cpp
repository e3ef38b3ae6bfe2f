#include "kato/oracle.hpp"

#include <cmath>
#include <sstream>

#include "kato/errors.hpp"

namespace kato {

CMatrix oracle_derivative(const ProjectorFamily& family, Complex lambda, Complex dir,
                          const OracleConfig& cfg) {
    DerivativeMode mode = cfg.derivative_mode;
    if (mode == DerivativeMode::Auto) {
        mode = family.has_derivative() ? DerivativeMode::Exact : DerivativeMode::CentralFD;
    }
    if (mode == DerivativeMode::Exact) {
        return family.derivative(lambda);
    }
    return family.derivative_fd(lambda, dir, cfg.fd_scale * (1.0 + std::abs(lambda)));
}

namespace {

enum class Rhs { Full, Reduced };

std::vector<BasisFrame> integrate(const ProjectorFamily& family, const Mesh& mesh,
                                  const CMatrix& r0, const OracleConfig& cfg, Rhs rhs) {
    if (cfg.substeps_per_segment < 1) {
        throw UsageError("oracle: substeps_per_segment must be >= 1");
    }
    if (r0.rows() != family.dim()) {
        throw UsageError("oracle: initial basis has the wrong number of rows");
    }
    const int substeps = cfg.substeps_per_segment;

    std::vector<BasisFrame> frames;
    frames.reserve(mesh.points().size());
    frames.push_back({mesh[0], r0});
    CMatrix r = r0;
    for (std::size_t j = 0; j < mesh.steps(); ++j) {
        const Segment seg = mesh.segment(j);
        const Complex delta = mesh[j + 1] - mesh[j];
        const Complex dir = delta / std::abs(delta);
        // dR/ds = delta * F(lambda(s)) R on s in [0, 1].
        auto slope = [&](double s, const CMatrix& x) -> CMatrix {
            const Complex lambda = seg.point(s);
            const CMatrix p = family.eval(lambda).matrix();
            const CMatrix dp = oracle_derivative(family, lambda, dir, cfg);
            if (rhs == Rhs::Reduced) {
                return delta * (dp * x);
            }
            return delta * (dp * (p * x) - p * (dp * x));
        };
        const double ds = 1.0 / substeps;
        for (int i = 0; i < substeps; ++i) {
            const double s0 = static_cast<double>(i) / substeps;
            const double s_mid = (i + 0.5) / substeps;
            const double s1 = static_cast<double>(i + 1) / substeps;
            const CMatrix k1 = slope(s0, r);
            const CMatrix k2 = slope(s_mid, r + (0.5 * ds) * k1);
            const CMatrix k3 = slope(s_mid, r + (0.5 * ds) * k2);
            const CMatrix k4 = slope(s1, r + ds * k3);
            r += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!all_finite(r)) {
            throw NonFiniteState("oracle: non-finite state after segment " + std::to_string(j));
        }
        frames.push_back({mesh[j + 1], r});
    }
    return frames;
}

}  // namespace

std::vector<BasisFrame> integrate_kato(const ProjectorFamily& family, const Mesh& mesh,
                                       const CMatrix& r0, const OracleConfig& cfg) {
    return integrate(family, mesh, r0, cfg, Rhs::Full);
}

std::vector<BasisFrame> integrate_reduced_kato(const ProjectorFamily& family, const Mesh& mesh,
                                               const CMatrix& r0, const OracleConfig& cfg) {
    return integrate(family, mesh, r0, cfg, Rhs::Reduced);
}

Prop1Report verify_prop1(const ProjectorFamily& family, const Mesh& mesh, const CMatrix& r0,
                         const OracleConfig& cfg) {
    const CMatrix p0 = family.eval(mesh[0]).matrix();
    const double gap = (p0 * r0 - r0).norm();
    if (gap > 1e-8 * (1.0 + r0.norm())) {
        std::ostringstream msg;
        msg << "verify_prop1: initial basis is not in range P(lambda_0): ||P r0 - r0||_F = "
            << gap;
        throw InitNotInRange(msg.str());
    }
    const auto reduced = integrate_reduced_kato(family, mesh, r0, cfg);
    const auto full = integrate_kato(family, mesh, r0, cfg);

    Prop1Report report;
    const int k = static_cast<int>(r0.cols());
    for (std::size_t j = 0; j < reduced.size(); ++j) {
        const Complex lambda = reduced[j].lambda;
        const CMatrix& r = reduced[j].r;
        // Direction of the chord leaving (or, at the end, entering) lambda_j.
        const std::size_t seg = std::min(j, mesh.steps() - 1);
        const Complex delta = mesh[seg + 1] - mesh[seg];
        const CMatrix p = family.eval(lambda).matrix();
        const CMatrix dp = oracle_derivative(family, lambda, delta / std::abs(delta), cfg);
        report.pr_minus_r = std::max(report.pr_minus_r, (p * r - r).norm());
        report.p_rprime = std::max(report.p_rprime, (p * (dp * r)).norm());
        if (numerical_rank(r, 1e-8) != k) {
            report.rank_constant = false;
        }
    }
    report.kato_vs_reduced = (reduced.back().r - full.back().r).norm();
    return report;
}

namespace {

template <typename Residual>
double max_relative(const ProjectorFamily& family, std::span<const Complex> samples,
                    const OracleConfig& cfg, Residual residual) {
    double worst = 0.0;
    for (const Complex lambda : samples) {
        const CMatrix p = family.eval(lambda).matrix();
        const CMatrix dp = oracle_derivative(family, lambda, Complex(1.0, 0.0), cfg);
        worst = std::max(worst, residual(p, dp) / (1.0 + dp.norm()));
    }
    return worst;
}

}  // namespace

double check_pprop(const ProjectorFamily& family, std::span<const Complex> samples,
                   const OracleConfig& cfg) {
    return max_relative(family, samples, cfg,
                        [](const CMatrix& p, const CMatrix& dp) { return (p * dp * p).norm(); });
}

double check_product_rule(const ProjectorFamily& family, std::span<const Complex> samples,
                          const OracleConfig& cfg) {
    return max_relative(family, samples, cfg, [](const CMatrix& p, const CMatrix& dp) {
        return (p * dp + dp * p - dp).norm();
    });
}

}  // namespace kato
