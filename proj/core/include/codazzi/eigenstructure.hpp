#pragma once

#include <utility>
#include <vector>

#include "codazzi/connection.hpp"

namespace codazzi {

/// Eigendata of A relative to g at one grid node. Eigenvalues ascend;
/// eigenvector columns are g-orthonormal. `included` is false where the
/// cluster structure is not the simple + (n-1)-fold split the analysis needs
/// (ClusterAmbiguity: collision within cluster_tol, or a different split).
struct PointEigen {
    bool solved = false;    // g was SPD and the eigensolve succeeded
    bool included = false;  // two-cluster {1, n-1} structure present
    bool sign_continuous = true;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd frame;
    std::vector<std::pair<int, int>> clusters; // [begin, end) into sorted eigenvalues
    int simple_cluster = -1;

    int simple_col() const { return clusters[simple_cluster].first; }
    double mu() const { return eigenvalues[simple_col()]; }
    /// Mean of the (n-1)-fold cluster.
    double lambda() const;
    /// Columns of the (n-1)-fold cluster.
    std::vector<int> lambda_cols() const;
};

struct EigenStructure {
    std::vector<PointEigen> nodes; // grid order
    int excluded_count = 0;        // ambiguous or degenerate nodes
    int included_count = 0;
    bool two_cluster_everywhere = false; // on every solved node
    bool single_cluster_everywhere = false; // "not two-eigenvalue" (e.g. A = c g)
};

/// Solve the g-symmetric generalized eigenproblem A v = kappa g v on every
/// grid node, cluster eigenvalues by relative gap, and fix eigenvector gauge
/// by a nearest-neighbor alignment sweep in grid order (signs for the simple
/// vector, an orthogonal Procrustes fit for the degenerate block).
EigenStructure eigen_structure(const SymTensorField& A, const MetricField& g, const Grid& grid,
                               double cluster_tol = 1e-6);

/// Point eigensolve outside the grid, used by finite-difference probes.
/// Returns false when g is not SPD or the cluster layout does not match `ref`.
bool eigen_solve_aligned(const SymTensorField& A, const MetricField& g, const Point& p,
                         const PointEigen& ref, double cluster_tol, Eigen::VectorXd& evals_out,
                         Eigen::MatrixXd& frame_out);

/// Directional data of the eigen fields at one node, from Richardson-
/// extrapolated central differences of off-grid eigensolves. The step is
/// fd_rel times each axis length — small enough that the O(h^4) truncation
/// sits well below the 1e-6 lemma tolerances.
struct EigenDerivatives {
    bool ok = false;
    Eigen::VectorXd dmu;                 // coordinate gradient of mu
    Eigen::VectorXd dlambda;             // coordinate gradient of lambda
    std::vector<Eigen::MatrixXd> dframe; // per axis: d(frame)/dx_axis
};

EigenDerivatives eigen_derivatives(const SymTensorField& A, const MetricField& g, const Grid& grid,
                                   const Point& p, const PointEigen& center, double cluster_tol,
                                   double fd_rel = 1e-3, bool with_frames = true);

} // namespace codazzi
