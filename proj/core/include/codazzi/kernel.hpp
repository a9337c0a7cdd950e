#pragma once

#include "codazzi/hess_system.hpp"

namespace codazzi {

/// Numerical kernel of an assembled system: the right singular vectors with
/// sigma < sigma_rel_tol * sigma_max, orthonormal, embedded back into the
/// full unknown layout (zero on uncoupled columns).
struct KernelBasis {
    Eigen::MatrixXd vectors;            // 2*n_nodes x kernel_dim
    Eigen::VectorXd singular_tail;      // smallest min(16, cols) singular values, ascending
    double sigma_max = 0.0;
    int kernel_dim = 0;
    bool contains_constant = false;     // the f-constant direction lies in the span
};

/// Dense SVD for up to `dense_limit` coupled unknowns, then a seeded,
/// restarted subspace iteration on the normal matrix.
KernelBasis kernel_basis(const HessSystem& sys, double sigma_rel_tol,
                         int dense_limit = 10000, unsigned seed = 0);

} // namespace codazzi
