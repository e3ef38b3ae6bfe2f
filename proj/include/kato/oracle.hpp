#pragma once

#include <span>
#include <vector>

#include "kato/contour.hpp"
#include "kato/matrix.hpp"
#include "kato/problems.hpp"

namespace kato {

enum class DerivativeMode {
    Auto,       // exact when the family has one, else CentralFD
    Exact,
    CentralFD,  // h = fd_scale * (1 + |lambda|) along the chord direction
};

struct OracleConfig {
    int substeps_per_segment = 64;
    DerivativeMode derivative_mode = DerivativeMode::Auto;
    double fd_scale = 1e-6;
};

/// Reference solution of R' = (P'P - PP') R: classical RK4 along each mesh
/// chord with cfg.substeps_per_segment substeps, frames at the mesh points.
/// The initial basis is not checked against range P(lambda_0).
std::vector<BasisFrame> integrate_kato(const ProjectorFamily& family, const Mesh& mesh,
                                       const CMatrix& r0, const OracleConfig& cfg = {});

/// Same integrator for the reduced equation R' = P' R.
std::vector<BasisFrame> integrate_reduced_kato(const ProjectorFamily& family, const Mesh& mesh,
                                               const CMatrix& r0, const OracleConfig& cfg = {});

struct Prop1Report {
    double pr_minus_r = 0.0;       // max_j ||P R - R||_F
    double p_rprime = 0.0;         // max_j ||P P' R||_F, the realised P R'
    double kato_vs_reduced = 0.0;  // ||R_L(reduced) - R_L(full)||_F
    bool rank_constant = true;
};

/// Integrates the reduced equation and measures how far the numerical
/// solution is from the exact properties PR = R, PR' = 0 and agreement with
/// the full equation. Throws InitNotInRange unless P(lambda_0) r0 = r0 to
/// 1e-8 (1 + ||r0||_F).
Prop1Report verify_prop1(const ProjectorFamily& family, const Mesh& mesh, const CMatrix& r0,
                         const OracleConfig& cfg = {});

/// max over samples of ||P P' P||_F / (1 + ||P'||_F).
double check_pprop(const ProjectorFamily& family, std::span<const Complex> samples,
                   const OracleConfig& cfg = {});

/// max over samples of ||P P' + P' P - P'||_F / (1 + ||P'||_F), the
/// derivative of P^2 = P.
double check_product_rule(const ProjectorFamily& family, std::span<const Complex> samples,
                          const OracleConfig& cfg = {});

/// P'(lambda) per the configured mode; `dir` is the finite-difference direction.
CMatrix oracle_derivative(const ProjectorFamily& family, Complex lambda, Complex dir,
                          const OracleConfig& cfg);

}  // namespace kato
