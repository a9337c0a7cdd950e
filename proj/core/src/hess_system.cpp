#include "codazzi/hess_system.hpp"

#include <cmath>

#include "codazzi/parallel.hpp"

namespace codazzi {

double HessSystem::residual(const Eigen::VectorXd& v) const {
    return (matrix * v).cwiseAbs().maxCoeff();
}

Eigen::VectorXd HessSystem::sample(const ScalarExpr& f, const ScalarExpr& a) const {
    Eigen::VectorXd v(2 * n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const Point p = grid.point(i);
        v[f_col(i)] = f.value_at(p);
        v[a_col(i)] = a.value_at(p);
    }
    return v;
}

HessSystem assemble_hess_system(const MetricField& g, const Grid& grid) {
    const int n = grid.dim();
    for (int c : grid.counts())
        if (c < 5) throw GridTooCoarse("Hess f = a g discretization needs >= 5 nodes per axis");

    HessSystem sys{grid, grid.size(), n, {}, {}, {}, {}, 0};

    std::vector<int> eq_nodes;
    for (int i = 0; i < grid.size(); ++i)
        if (grid.is_interior(i)) eq_nodes.push_back(i);
    sys.equation_nodes = eq_nodes;

    const int pairs = n * (n + 1) / 2;
    const int rows = static_cast<int>(eq_nodes.size()) * pairs;
    sys.row_scale.assign(rows, 1.0);

    struct RowEntries {
        std::vector<Eigen::Triplet<double>> triplets;
    };
    std::vector<RowEntries> per_eq(eq_nodes.size());
    std::vector<double> scales(eq_nodes.size());

    parallel_for(static_cast<int>(eq_nodes.size()), [&](int e) {
        const int node = eq_nodes[e];
        const Point p = grid.point(node);
        const Eigen::MatrixXd gmat = g.value_at(p); // throws DegenerateMetric
        const Christoffels gamma = christoffel_at(g, p);
        const double scale = 1.0 / std::max(gmat.cwiseAbs().maxCoeff(), 1e-300);
        scales[e] = scale;

        auto& tr = per_eq[e].triplets;
        int row = e * pairs;
        for (int i = 0; i < n; ++i) {
            const double hi = grid.spacing(i);
            for (int j = i; j < n; ++j, ++row) {
                const double hj = grid.spacing(j);

                if (i == j) {
                    tr.emplace_back(row, sys.f_col(grid.neighbor(node, i, 1)), scale / (hi * hi));
                    tr.emplace_back(row, sys.f_col(node), -2.0 * scale / (hi * hi));
                    tr.emplace_back(row, sys.f_col(grid.neighbor(node, i, -1)), scale / (hi * hi));
                } else {
                    const double c = scale / (4.0 * hi * hj);
                    const int pp = grid.neighbor(grid.neighbor(node, i, 1), j, 1);
                    const int pm = grid.neighbor(grid.neighbor(node, i, 1), j, -1);
                    const int mp = grid.neighbor(grid.neighbor(node, i, -1), j, 1);
                    const int mm = grid.neighbor(grid.neighbor(node, i, -1), j, -1);
                    tr.emplace_back(row, sys.f_col(pp), c);
                    tr.emplace_back(row, sys.f_col(pm), -c);
                    tr.emplace_back(row, sys.f_col(mp), -c);
                    tr.emplace_back(row, sys.f_col(mm), c);
                }

                for (int k = 0; k < n; ++k) {
                    const double gkij = gamma(k, i, j);
                    if (gkij == 0.0) continue;
                    const double hk = grid.spacing(k);
                    tr.emplace_back(row, sys.f_col(grid.neighbor(node, k, 1)),
                                    -gkij * scale / (2.0 * hk));
                    tr.emplace_back(row, sys.f_col(grid.neighbor(node, k, -1)),
                                    gkij * scale / (2.0 * hk));
                }

                tr.emplace_back(row, sys.a_col(node), -gmat(i, j) * scale);
            }
        }
    });

    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t e = 0; e < per_eq.size(); ++e) {
        for (const auto& t : per_eq[e].triplets) triplets.push_back(t);
        for (int r = 0; r < pairs; ++r) sys.row_scale[e * pairs + r] = scales[e];
    }

    sys.matrix.resize(rows, 2 * sys.n_nodes);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());

    sys.coupled.assign(2 * sys.n_nodes, 0);
    for (const auto& t : triplets) sys.coupled[t.col()] = 1;
    for (char c : sys.coupled) sys.coupled_count += c;
    return sys;
}

} // namespace codazzi
