#pragma once

#include "codazzi/codazzi_checks.hpp"

namespace codazzi {

/// Warp-rate extraction for an aligned two-eigenvalue tensor: with the simple
/// eigenvector collinear to ∂t, eta = (mu - lambda)^(-1) ∂_t lambda satisfies
/// ∂_t g_ij = 2 eta g_ij on the spatial block; q(t) = ∫ 2 eta dt then makes
/// h_ij = e^(-q) g_ij t-independent.
struct WarpExtract {
    enum class Status { Ok, NotWarpedEvidence, MisalignedFrame };
    Status status = Status::NotWarpedEvidence;

    CharConditions conditions;        // the gate that was applied
    ResidualReport eta_spatial;       // |proj_spatial grad eta| over the grid
    std::vector<double> t_nodes;      // t-axis sample locations
    std::vector<double> eta_samples;  // eta along the anchor t-line
    std::vector<double> q_samples;    // trapezoid integral of 2*eta, q(t0) = 0
    std::vector<Eigen::MatrixXd> h_samples; // e^(-q) g spatial block along the line
    double max_h_t_residual = 0.0;    // max |∂_t(e^(-q) g_ij)| over the grid
};

WarpExtract eta_and_warp_extract(const SymTensorField& A, const MetricField& g,
                                 const EigenStructure& eig, const Grid& grid,
                                 const Tolerances& tol = {});

} // namespace codazzi
