#include "codazzi/kernel.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace codazzi {

namespace {

Eigen::VectorXd embed(const HessSystem& sys, const Eigen::VectorXd& coupled_vec,
                      const std::vector<int>& coupled_cols) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(2 * sys.n_nodes);
    for (std::size_t i = 0; i < coupled_cols.size(); ++i) full[coupled_cols[i]] = coupled_vec[i];
    return full;
}

KernelBasis finish(const HessSystem& sys, const std::vector<int>& coupled_cols,
                   const Eigen::MatrixXd& kernel_coupled, const Eigen::VectorXd& sigma_ascending,
                   double sigma_max) {
    KernelBasis kb;
    kb.sigma_max = sigma_max;
    kb.kernel_dim = static_cast<int>(kernel_coupled.cols());
    kb.vectors.resize(2 * sys.n_nodes, kb.kernel_dim);
    for (int c = 0; c < kb.kernel_dim; ++c)
        kb.vectors.col(c) = embed(sys, kernel_coupled.col(c), coupled_cols);

    const int tail = std::min<int>(16, static_cast<int>(sigma_ascending.size()));
    kb.singular_tail = sigma_ascending.head(tail);

    // the constant-f direction must always lie in the kernel span
    Eigen::VectorXd cdir = Eigen::VectorXd::Zero(2 * sys.n_nodes);
    for (int node = 0; node < sys.n_nodes; ++node)
        if (sys.coupled[sys.f_col(node)]) cdir[sys.f_col(node)] = 1.0;
    cdir.normalize();
    if (kb.kernel_dim > 0) {
        const Eigen::VectorXd proj = kb.vectors * (kb.vectors.transpose() * cdir);
        kb.contains_constant = (cdir - proj).norm() < 1e-6;
    }
    return kb;
}

KernelBasis dense_path(const HessSystem& sys, const std::vector<int>& coupled_cols,
                       double sigma_rel_tol) {
    const int m = static_cast<int>(sys.matrix.rows());
    const int nc = static_cast<int>(coupled_cols.size());
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(m, nc);
    std::vector<int> col_map(2 * sys.n_nodes, -1);
    for (int i = 0; i < nc; ++i) col_map[coupled_cols[i]] = i;
    for (int r = 0; r < m; ++r)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.matrix, r); it;
             ++it)
            dense(r, col_map[it.col()]) = it.value();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues(); // descending
    const double sigma_max = sv.size() > 0 ? sv[0] : 0.0;
    const double cut = sigma_rel_tol * sigma_max;

    std::vector<int> kernel_idx;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] < cut) kernel_idx.push_back(i);

    Eigen::MatrixXd kernel_coupled(nc, kernel_idx.size());
    for (std::size_t k = 0; k < kernel_idx.size(); ++k)
        kernel_coupled.col(static_cast<int>(k)) = svd.matrixV().col(kernel_idx[k]);

    Eigen::VectorXd ascending = sv.reverse();
    return finish(sys, coupled_cols, kernel_coupled, ascending, sigma_max);
}

// Restarted subspace iteration on the (shifted) normal matrix for the
// smallest singular subspace. Deterministic: fixed-seed start block.
KernelBasis iterative_path(const HessSystem& sys, const std::vector<int>& coupled_cols,
                           double sigma_rel_tol, unsigned seed) {
    const int nc = static_cast<int>(coupled_cols.size());
    std::vector<int> col_map(2 * sys.n_nodes, -1);
    for (int i = 0; i < nc; ++i) col_map[coupled_cols[i]] = i;

    std::vector<Eigen::Triplet<double>> trips;
    for (int r = 0; r < sys.matrix.rows(); ++r)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.matrix, r); it;
             ++it)
            trips.emplace_back(r, col_map[it.col()], it.value());
    Eigen::SparseMatrix<double> A(sys.matrix.rows(), nc);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseMatrix<double> N = Eigen::SparseMatrix<double>(A.transpose()) * A;

    // sigma_max estimate by power iteration on N
    Eigen::VectorXd v = Eigen::VectorXd::Ones(nc).normalized();
    double nmax = 0.0;
    for (int it = 0; it < 60; ++it) {
        v = (N * v).eval();
        nmax = v.norm();
        if (nmax == 0.0) break;
        v /= nmax;
    }
    const double sigma_max = std::sqrt(nmax);
    const double shift = std::max(1e-30, 1e-12 * nmax);

    Eigen::SparseMatrix<double> Nsh = N;
    for (int i = 0; i < nc; ++i) Nsh.coeffRef(i, i) += shift;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Nsh);
    if (ldlt.info() != Eigen::Success)
        throw ConvergenceFailure("normal-matrix factorization failed");

    const int block = std::min(nc, 24);
    std::mt19937 rng(seed + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd X(nc, block);
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < block; ++j) X(i, j) = gauss(rng);

    Eigen::VectorXd theta(block);
    for (int iter = 0; iter < 200; ++iter) {
        X = ldlt.solve(X);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
        X = qr.householderQ() * Eigen::MatrixXd::Identity(nc, block);
        // Rayleigh-Ritz on N
        Eigen::MatrixXd H = X.transpose() * (N * X);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        X = X * es.eigenvectors();
        theta = es.eigenvalues(); // ascending
        if (iter >= 20 && theta[block - 1] > (sigma_rel_tol * sigma_max) * (sigma_rel_tol * sigma_max) * 1e4)
            break;
    }

    const double cut = sigma_rel_tol * sigma_max;
    std::vector<int> keep;
    Eigen::VectorXd sig(block);
    for (int i = 0; i < block; ++i) {
        sig[i] = std::sqrt(std::max(0.0, theta[i]));
        if (sig[i] < cut) keep.push_back(i);
    }
    if (!keep.empty() && static_cast<int>(keep.size()) == block)
        throw ConvergenceFailure("kernel block exhausted; enlarge the subspace");

    Eigen::MatrixXd kernel_coupled(nc, keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) kernel_coupled.col(static_cast<int>(k)) = X.col(keep[k]);
    return finish(sys, coupled_cols, kernel_coupled, sig, sigma_max);
}

} // namespace

KernelBasis kernel_basis(const HessSystem& sys, double sigma_rel_tol, int dense_limit,
                         unsigned seed) {
    std::vector<int> coupled_cols;
    for (int c = 0; c < 2 * sys.n_nodes; ++c)
        if (sys.coupled[c]) coupled_cols.push_back(c);

    if (static_cast<int>(coupled_cols.size()) <= dense_limit)
        return dense_path(sys, coupled_cols, sigma_rel_tol);
    return iterative_path(sys, coupled_cols, sigma_rel_tol, seed);
}

} // namespace codazzi
