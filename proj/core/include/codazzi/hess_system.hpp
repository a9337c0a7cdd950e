#pragma once

#include <Eigen/SparseCore>

#include "codazzi/connection.hpp"
#include "codazzi/report.hpp"

namespace codazzi {

/// Discretization of L(f, a) = Hess f - a g over a grid. Unknown layout:
/// column j < n_nodes is f at node j, column n_nodes + j is a at node j.
/// One equation row per (equation node, index pair i <= j); equation nodes
/// are the nodes with full central stencils (all nodes on periodic axes).
/// Rows are scaled by 1/max|g(p)| for conditioning.
///
/// Boundary f and a stay unknowns coupled through the stencils; no boundary
/// condition is imposed. Unknowns that no equation touches (a at non-equation
/// nodes, f at stencil-unreachable corners) are tracked in `coupled` and
/// ignored by the kernel computation — they are undetermined by the
/// discretization, not evidence about the PDE.
struct HessSystem {
    Grid grid;
    int n_nodes = 0;
    int dim = 0;
    Eigen::SparseMatrix<double, Eigen::RowMajor> matrix; // rows x 2*n_nodes, scaled
    std::vector<double> row_scale;                       // applied factor per row
    std::vector<int> equation_nodes;                     // node of each row block
    std::vector<char> coupled;                           // per column: touched by any row
    int coupled_count = 0;

    int f_col(int node) const { return node; }
    int a_col(int node) const { return n_nodes + node; }

    /// Max-norm residual of the scaled system on a full-length vector.
    double residual(const Eigen::VectorXd& v) const;

    /// Sample (f, a) expressions on the nodes into a full-length vector.
    Eigen::VectorXd sample(const ScalarExpr& f, const ScalarExpr& a) const;
};

/// Assemble second-order central stencils for Hess f rows with exact
/// Christoffels at the equation nodes. Throws GridTooCoarse below 5 nodes
/// per axis and DegenerateMetric if g fails SPD at an equation node.
HessSystem assemble_hess_system(const MetricField& g, const Grid& grid);

} // namespace codazzi
