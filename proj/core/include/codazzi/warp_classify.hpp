#pragma once

#include "codazzi/kernel.hpp"

namespace codazzi {

/// Verdict of the discrete Brinkmann test. `warped_candidate` carries the
/// certificate (f, a) as node tables; its gradient at the probe exceeded
/// grad_tol and its system residual was re-checked. The verdict certifies
/// only at grid resolution on the chosen box — a trivial numerical kernel is
/// reported as evidence, not as a proof of the continuum statement.
struct WarpVerdict {
    enum class Kind { WarpedCandidate, NoNontrivialSolution, Inconclusive };
    Kind kind = Kind::Inconclusive;
    int kernel_dim = 0;
    std::vector<double> grad_norms_probe;    // per post-projection kernel vector
    Eigen::VectorXd certificate_f;           // node values (empty unless warped)
    Eigen::VectorXd certificate_a;
    double certificate_grad_norm = 0.0;
    double certificate_residual = 0.0;       // scaled-system residual of the certificate
};

/// Project the constant-f direction out of every kernel vector, renormalize,
/// and classify by the g-norm of the discrete gradient of the f-part at the
/// probe (and, for the negative verdict, at `n_secondary` seeded interior
/// probes).
WarpVerdict classify_warped(const KernelBasis& basis, const HessSystem& sys, const MetricField& g,
                            const Point& probe, double grad_tol, unsigned seed = 0,
                            int n_secondary = 5);

/// Exact-derivative residual of a candidate pair: max over the grid and index
/// pairs of |Hess f(∂i,∂j) - a g_ij| with AD derivatives of f (no stencils).
ResidualReport verify_candidate(const ScalarExpr& f, const ScalarExpr& a, const MetricField& g,
                                const Grid& grid, double tolerance = 1e-10);

/// Discrete g-norm of grad f at the node nearest to `probe`, from second-order
/// differences of per-node f values (one-sided at non-periodic edges).
double grad_norm_at(const HessSystem& sys, const MetricField& g, const Eigen::VectorXd& f_nodes,
                    const Point& probe);

} // namespace codazzi
