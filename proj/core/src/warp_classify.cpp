#include "codazzi/warp_classify.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "codazzi/parallel.hpp"

namespace codazzi {

double grad_norm_at(const HessSystem& sys, const MetricField& g, const Eigen::VectorXd& f_nodes,
                    const Point& probe) {
    const Grid& grid = sys.grid;
    const int n = grid.dim();
    const int node = grid.nearest_node(probe);
    const Point p = grid.point(node);

    Eigen::VectorXd df(n);
    for (int axis = 0; axis < n; ++axis) {
        const double h = grid.spacing(axis);
        const int up = grid.neighbor(node, axis, 1);
        const int dn = grid.neighbor(node, axis, -1);
        if (up >= 0 && dn >= 0) {
            df[axis] = (f_nodes[up] - f_nodes[dn]) / (2.0 * h);
        } else if (up >= 0) {
            const int up2 = grid.neighbor(node, axis, 2);
            df[axis] = (-3.0 * f_nodes[node] + 4.0 * f_nodes[up] - f_nodes[up2]) / (2.0 * h);
        } else {
            const int dn2 = grid.neighbor(node, axis, -2);
            df[axis] = (3.0 * f_nodes[node] - 4.0 * f_nodes[dn] + f_nodes[dn2]) / (2.0 * h);
        }
    }
    const Eigen::MatrixXd ginv = g.inverse_at(p);
    return std::sqrt(std::max(0.0, df.dot(ginv * df)));
}

WarpVerdict classify_warped(const KernelBasis& basis, const HessSystem& sys, const MetricField& g,
                            const Point& probe, double grad_tol, unsigned seed, int n_secondary) {
    WarpVerdict verdict;
    verdict.kernel_dim = basis.kernel_dim;

    // constant-f direction over the coupled f-columns
    Eigen::VectorXd cdir = Eigen::VectorXd::Zero(2 * sys.n_nodes);
    for (int node = 0; node < sys.n_nodes; ++node)
        if (sys.coupled[sys.f_col(node)]) cdir[sys.f_col(node)] = 1.0;
    cdir.normalize();

    std::vector<Eigen::VectorXd> candidates;
    for (int c = 0; c < basis.kernel_dim; ++c) {
        Eigen::VectorXd v = basis.vectors.col(c);
        v -= cdir.dot(v) * cdir;
        const double norm = v.norm();
        if (norm < 1e-8) continue; // this was the constant direction itself
        candidates.push_back(v / norm);
    }

    // secondary probes: seeded draws over equation nodes
    std::vector<Point> secondary;
    std::mt19937 rng(seed + 17);
    if (!sys.equation_nodes.empty()) {
        std::uniform_int_distribution<int> pick(0,
                                                static_cast<int>(sys.equation_nodes.size()) - 1);
        for (int s = 0; s < n_secondary; ++s)
            secondary.push_back(sys.grid.point(sys.equation_nodes[pick(rng)]));
    }

    double best = -1.0;
    int best_idx = -1;
    bool all_small_everywhere = true;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Eigen::VectorXd f_part = candidates[i].head(sys.n_nodes);
        const double gn = grad_norm_at(sys, g, f_part, probe);
        verdict.grad_norms_probe.push_back(gn);
        if (gn > best) {
            best = gn;
            best_idx = static_cast<int>(i);
        }
        if (gn >= grad_tol) all_small_everywhere = false;
        for (const Point& q : secondary)
            if (grad_norm_at(sys, g, f_part, q) >= grad_tol) all_small_everywhere = false;
    }

    if (best_idx >= 0 && best > grad_tol) {
        verdict.kind = WarpVerdict::Kind::WarpedCandidate;
        verdict.certificate_f = candidates[best_idx].head(sys.n_nodes);
        verdict.certificate_a = candidates[best_idx].tail(sys.n_nodes);
        verdict.certificate_grad_norm = best;
        verdict.certificate_residual = sys.residual(candidates[best_idx]);
    } else if (all_small_everywhere) {
        verdict.kind = WarpVerdict::Kind::NoNontrivialSolution;
    } else {
        verdict.kind = WarpVerdict::Kind::Inconclusive;
    }
    return verdict;
}

ResidualReport verify_candidate(const ScalarExpr& f, const ScalarExpr& a, const MetricField& g,
                                const Grid& grid, double tolerance) {
    std::vector<double> per_node(grid.size(), std::numeric_limits<double>::quiet_NaN());
    parallel_for(grid.size(), [&](int idx) {
        const Point p = grid.point(idx);
        try {
            const Eigen::MatrixXd h = hessian_scalar(f, g, p);
            const Eigen::MatrixXd gmat = g.tensor().value_at(p);
            const double aval = a.value_at(p);
            per_node[idx] = (h - aval * gmat).cwiseAbs().maxCoeff();
        } catch (const Error&) {
        }
    });
    return reduce_residuals("verify_candidate", grid, per_node, tolerance);
}

} // namespace codazzi
