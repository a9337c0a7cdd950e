#include "codazzi/warp_extract.hpp"

#include <cmath>
#include <limits>

#include "codazzi/parallel.hpp"

namespace codazzi {

namespace {

constexpr double kExcluded = std::numeric_limits<double>::quiet_NaN();

/// eta at an arbitrary point: simple eigenvalue mu, cluster mean lambda, and
/// the coordinate t-derivative of lambda by Richardson FD of eigensolves.
bool eta_at(const SymTensorField& A, const MetricField& g, const Grid& grid, const Point& p,
            const PointEigen& ref, const Tolerances& tol, double& eta_out) {
    const double axis_len =
        grid.spacing(0) * (grid.periodic(0) ? grid.counts()[0] : grid.counts()[0] - 1);
    const double h = tol.fd_rel * axis_len;

    Eigen::VectorXd ev_c;
    Eigen::MatrixXd fr;
    if (!eigen_solve_aligned(A, g, p, ref, tol.cluster, ev_c, fr)) return false;

    double lam[4];
    const double offs[4] = {-2.0, -1.0, 1.0, 2.0};
    const auto cols = ref.lambda_cols();
    for (int s = 0; s < 4; ++s) {
        Point q = p;
        q[0] += offs[s] * h;
        Eigen::VectorXd ev;
        Eigen::MatrixXd f;
        if (!eigen_solve_aligned(A, g, q, ref, tol.cluster, ev, f)) return false;
        double sum = 0.0;
        for (int c : cols) sum += ev[c];
        lam[s] = sum / cols.size();
    }
    const double d_h = (lam[2] - lam[1]) / (2.0 * h);
    const double d_2h = (lam[3] - lam[0]) / (4.0 * h);
    const double dlam_dt = (4.0 * d_h - d_2h) / 3.0;

    double mu = ev_c[ref.simple_col()];
    double lambda = 0.0;
    for (int c : cols) lambda += ev_c[c];
    lambda /= cols.size();
    const double gap = mu - lambda;
    if (gap == 0.0) return false;
    eta_out = dlam_dt / gap;
    return true;
}

} // namespace

WarpExtract eta_and_warp_extract(const SymTensorField& A, const MetricField& g,
                                 const EigenStructure& eig, const Grid& grid,
                                 const Tolerances& tol) {
    WarpExtract out;
    out.conditions = char_conditions(A, g, eig, grid, tol);
    if (!out.conditions.all_true || out.conditions.vacuous) {
        out.status = WarpExtract::Status::NotWarpedEvidence;
        return out;
    }

    const int n = g.dim();

    // The extraction needs the simple eigenvector collinear with ∂t. Verified,
    // not assumed: |g(v_mu, ∂i)|/sqrt(g_ii) below tol.align at every node.
    for (int idx = 0; idx < grid.size(); ++idx) {
        const PointEigen& pe = eig.nodes[idx];
        if (!pe.included) continue;
        Eigen::MatrixXd gmat;
        try {
            gmat = g.value_at(grid.point(idx));
        } catch (const Error&) {
            continue;
        }
        const Eigen::VectorXd gv = gmat * pe.frame.col(pe.simple_col());
        for (int i = 1; i < n; ++i) {
            if (std::abs(gv[i]) / std::sqrt(gmat(i, i)) > tol.align) {
                out.status = WarpExtract::Status::MisalignedFrame;
                return out;
            }
        }
    }

    // spatial constancy of eta: Richardson FD of the eta field along spatial axes
    std::vector<double> per_node(grid.size(), kExcluded);
    parallel_for(grid.size(), [&](int idx) {
        const PointEigen& pe = eig.nodes[idx];
        if (!pe.included) return;
        const Point p = grid.point(idx);
        double worst = 0.0;
        for (int axis = 1; axis < n; ++axis) {
            const double axis_len = grid.spacing(axis) * (grid.periodic(axis)
                                                              ? grid.counts()[axis]
                                                              : grid.counts()[axis] - 1);
            const double h = tol.fd_rel * axis_len;
            double e[4];
            const double offs[4] = {-2.0, -1.0, 1.0, 2.0};
            for (int s = 0; s < 4; ++s) {
                Point q = p;
                q[axis] += offs[s] * h;
                if (!eta_at(A, g, grid, q, pe, tol, e[s])) return;
            }
            const double d_h = (e[2] - e[1]) / (2.0 * h);
            const double d_2h = (e[3] - e[0]) / (4.0 * h);
            worst = std::max(worst, std::abs((4.0 * d_h - d_2h) / 3.0));
        }
        per_node[idx] = worst;
    });
    out.eta_spatial = reduce_residuals("eta_spatial_constancy", grid, per_node, tol.warp);

    // anchor t-line through the grid-center spatial coordinates
    std::vector<int> anchor(grid.dim());
    {
        const auto counts = grid.counts();
        for (int i = 0; i < grid.dim(); ++i) anchor[i] = counts[i] / 2;
    }
    const int nt = grid.counts()[0];
    out.t_nodes.resize(nt);
    out.eta_samples.resize(nt);
    for (int k = 0; k < nt; ++k) {
        auto mi = anchor;
        mi[0] = k;
        const int idx = grid.flat_index(mi);
        const Point p = grid.point(idx);
        out.t_nodes[k] = p[0];
        double eta = 0.0;
        const PointEigen& ref = eig.nodes[idx].included ? eig.nodes[idx] : eig.nodes[grid.flat_index(anchor)];
        if (!eta_at(A, g, grid, p, ref, tol, eta)) {
            out.status = WarpExtract::Status::NotWarpedEvidence;
            return out;
        }
        out.eta_samples[k] = eta;
    }

    out.q_samples.assign(nt, 0.0);
    for (int k = 1; k < nt; ++k) {
        const double dt = out.t_nodes[k] - out.t_nodes[k - 1];
        out.q_samples[k] =
            out.q_samples[k - 1] + dt * (out.eta_samples[k - 1] + out.eta_samples[k]);
    }

    out.h_samples.resize(nt);
    for (int k = 0; k < nt; ++k) {
        auto mi = anchor;
        mi[0] = k;
        const Point p = grid.point(grid.flat_index(mi));
        const Eigen::MatrixXd gmat = g.tensor().value_at(p);
        out.h_samples[k] = std::exp(-out.q_samples[k]) * gmat.bottomRightCorner(n - 1, n - 1);
    }

    // max |∂_t(e^(-q) g_ij)| by grid-level central differences in t
    double worst = 0.0;
    for (int idx = 0; idx < grid.size(); ++idx) {
        const int up = grid.neighbor(idx, 0, 1);
        const int dn = grid.neighbor(idx, 0, -1);
        if (up < 0 || dn < 0) continue;
        const auto mi = grid.multi_index(idx);
        const int kt = mi[0];
        const int kup = grid.multi_index(up)[0];
        const int kdn = grid.multi_index(dn)[0];
        if (kup != kt + 1 || kdn != kt - 1) continue; // periodic wrap in t has no q continuation
        const Eigen::MatrixXd gu = g.tensor().value_at(grid.point(up));
        const Eigen::MatrixXd gd = g.tensor().value_at(grid.point(dn));
        const double H = grid.spacing(0);
        const Eigen::MatrixXd diff =
            (std::exp(-out.q_samples[kup]) * gu.bottomRightCorner(n - 1, n - 1) -
             std::exp(-out.q_samples[kdn]) * gd.bottomRightCorner(n - 1, n - 1)) /
            (2.0 * H);
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    out.max_h_t_residual = worst;

    out.status = WarpExtract::Status::Ok;
    return out;
}

} // namespace codazzi
