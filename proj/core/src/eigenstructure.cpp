#include "codazzi/eigenstructure.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "codazzi/parallel.hpp"

namespace codazzi {

double PointEigen::lambda() const {
    const auto& c = clusters[1 - simple_cluster];
    double s = 0.0;
    for (int i = c.first; i < c.second; ++i) s += eigenvalues[i];
    return s / (c.second - c.first);
}

std::vector<int> PointEigen::lambda_cols() const {
    const auto& c = clusters[1 - simple_cluster];
    std::vector<int> cols;
    for (int i = c.first; i < c.second; ++i) cols.push_back(i);
    return cols;
}

namespace {

std::vector<std::pair<int, int>> cluster_eigenvalues(const Eigen::VectorXd& evals,
                                                     double cluster_tol) {
    // single linkage on the sorted eigenvalues, relative gap threshold
    const int n = static_cast<int>(evals.size());
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(evals[i]));
    std::vector<std::pair<int, int>> clusters;
    int begin = 0;
    for (int i = 1; i < n; ++i) {
        if (evals[i] - evals[i - 1] > cluster_tol * scale) {
            clusters.emplace_back(begin, i);
            begin = i;
        }
    }
    clusters.emplace_back(begin, n);
    return clusters;
}

bool classify_two_cluster(PointEigen& pe) {
    if (pe.clusters.size() != 2) return false;
    const int s0 = pe.clusters[0].second - pe.clusters[0].first;
    const int s1 = pe.clusters[1].second - pe.clusters[1].first;
    if (s0 == 1 && s1 >= 1 && s1 != 1) {
        pe.simple_cluster = 0;
        return true;
    }
    if (s1 == 1 && s0 >= 1 && s0 != 1) {
        pe.simple_cluster = 1;
        return true;
    }
    // n = 2 gives sizes {1,1}: there is no way to tell mu from lambda
    return false;
}

bool solve_point(const SymTensorField& A, const MetricField& g, const Point& p,
                 double cluster_tol, PointEigen& out) {
    Eigen::MatrixXd gmat = g.tensor().value_at(p);
    Eigen::LLT<Eigen::MatrixXd> llt(gmat);
    if (llt.info() != Eigen::Success) return false;
    Eigen::MatrixXd amat = A.value_at(p);

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(amat, gmat);
    if (solver.info() != Eigen::Success) return false;

    out.solved = true;
    out.eigenvalues = solver.eigenvalues();
    out.frame = solver.eigenvectors(); // g-orthonormal
    out.clusters = cluster_eigenvalues(out.eigenvalues, cluster_tol);
    out.included = classify_two_cluster(out);
    return true;
}

// Orthogonal Procrustes: the rotation Q minimizing ||C Q - R||_F.
Eigen::MatrixXd procrustes(const Eigen::MatrixXd& C, const Eigen::MatrixXd& R) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C.transpose() * R,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

// Align `cur` (in place) to the reference gauge: sign for the simple column,
// Procrustes within the degenerate block. Returns false when the overlap is
// too weak to define a continuation.
bool align_frames(const PointEigen& ref, PointEigen& cur) {
    if (!ref.included || !cur.included) return true;
    bool healthy = true;

    const int sref = ref.simple_col();
    const int scur = cur.simple_col();
    const double d = ref.frame.col(sref).dot(cur.frame.col(scur));
    if (d < 0) cur.frame.col(scur) *= -1.0;
    if (std::abs(d) < 0.1) healthy = false;

    const auto rc = ref.lambda_cols();
    const auto cc = cur.lambda_cols();
    if (rc.size() == cc.size() && rc.size() > 0) {
        const int k = static_cast<int>(rc.size());
        const int n = static_cast<int>(ref.frame.rows());
        Eigen::MatrixXd R(n, k), C(n, k);
        for (int j = 0; j < k; ++j) {
            R.col(j) = ref.frame.col(rc[j]);
            C.col(j) = cur.frame.col(cc[j]);
        }
        const Eigen::MatrixXd Q = procrustes(C, R);
        const Eigen::MatrixXd aligned = C * Q;
        for (int j = 0; j < k; ++j) cur.frame.col(cc[j]) = aligned.col(j);
        Eigen::JacobiSVD<Eigen::MatrixXd> overlap(C.transpose() * R);
        if (overlap.singularValues().minCoeff() < 0.1) healthy = false;
    }
    return healthy;
}

} // namespace

EigenStructure eigen_structure(const SymTensorField& A, const MetricField& g, const Grid& grid,
                               double cluster_tol) {
    EigenStructure es;
    es.nodes.resize(grid.size());

    parallel_for(grid.size(), [&](int i) {
        PointEigen pe;
        try {
            solve_point(A, g, grid.point(i), cluster_tol, pe);
        } catch (const Error&) {
            pe.solved = false;
        }
        es.nodes[i] = std::move(pe);
    });

    // sequential gauge-fixing sweep, by design order-dependent
    for (int i = 1; i < grid.size(); ++i) {
        if (!es.nodes[i].solved) continue;
        int prev = -1;
        for (int axis = grid.dim() - 1; axis >= 0 && prev < 0; --axis) {
            const int nb = grid.neighbor(i, axis, -1);
            if (nb >= 0 && nb < i && es.nodes[nb].solved) prev = nb;
        }
        if (prev < 0) prev = i - 1;
        if (prev >= 0 && es.nodes[prev].solved)
            es.nodes[i].sign_continuous = align_frames(es.nodes[prev], es.nodes[i]);
    }

    int solved = 0, included = 0, single = 0;
    for (const auto& pe : es.nodes) {
        if (!pe.solved) continue;
        ++solved;
        if (pe.included) ++included;
        if (pe.clusters.size() == 1) ++single;
    }
    es.included_count = included;
    es.excluded_count = grid.size() - included;
    es.two_cluster_everywhere = solved > 0 && included == solved && solved == grid.size();
    es.single_cluster_everywhere = solved > 0 && single == solved;
    return es;
}

bool eigen_solve_aligned(const SymTensorField& A, const MetricField& g, const Point& p,
                         const PointEigen& ref, double cluster_tol, Eigen::VectorXd& evals_out,
                         Eigen::MatrixXd& frame_out) {
    PointEigen pe;
    try {
        if (!solve_point(A, g, p, cluster_tol, pe)) return false;
    } catch (const Error&) {
        return false;
    }
    if (!pe.included || !ref.included) return false;
    if (pe.simple_cluster != ref.simple_cluster) return false;
    align_frames(ref, pe);
    evals_out = pe.eigenvalues;
    frame_out = pe.frame;
    return true;
}

EigenDerivatives eigen_derivatives(const SymTensorField& A, const MetricField& g, const Grid& grid,
                                   const Point& p, const PointEigen& center, double cluster_tol,
                                   double fd_rel, bool with_frames) {
    EigenDerivatives out;
    const int n = grid.dim();
    if (!center.included) return out;

    out.dmu = Eigen::VectorXd::Zero(n);
    out.dlambda = Eigen::VectorXd::Zero(n);
    if (with_frames)
        out.dframe.assign(n, Eigen::MatrixXd::Zero(center.frame.rows(), center.frame.cols()));

    const int simple = center.simple_col();
    const auto lam_cols = center.lambda_cols();

    for (int axis = 0; axis < n; ++axis) {
        const double axis_len =
            grid.spacing(axis) * (grid.periodic(axis) ? grid.counts()[axis]
                                                      : grid.counts()[axis] - 1);
        const double h = fd_rel * axis_len;

        // offsets -2h, -h, +h, +2h
        Eigen::VectorXd evals[4];
        Eigen::MatrixXd frames[4];
        const double offs[4] = {-2.0, -1.0, 1.0, 2.0};
        for (int s = 0; s < 4; ++s) {
            Point q = p;
            q[axis] += offs[s] * h;
            if (!eigen_solve_aligned(A, g, q, center, cluster_tol, evals[s], frames[s]))
                return out; // leaves ok = false
        }

        auto richardson = [&](double m2, double m1, double p1, double p2) {
            const double d_h = (p1 - m1) / (2.0 * h);
            const double d_2h = (p2 - m2) / (4.0 * h);
            return (4.0 * d_h - d_2h) / 3.0;
        };

        out.dmu[axis] =
            richardson(evals[0][simple], evals[1][simple], evals[2][simple], evals[3][simple]);

        double lam[4];
        for (int s = 0; s < 4; ++s) {
            double sum = 0.0;
            for (int c : lam_cols) sum += evals[s][c];
            lam[s] = sum / lam_cols.size();
        }
        out.dlambda[axis] = richardson(lam[0], lam[1], lam[2], lam[3]);

        if (with_frames) {
            for (int r = 0; r < center.frame.rows(); ++r)
                for (int c = 0; c < center.frame.cols(); ++c)
                    out.dframe[axis](r, c) = richardson(frames[0](r, c), frames[1](r, c),
                                                        frames[2](r, c), frames[3](r, c));
        }
    }
    out.ok = true;
    return out;
}

} // namespace codazzi
