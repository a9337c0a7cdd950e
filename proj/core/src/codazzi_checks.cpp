#include "codazzi/codazzi_checks.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "codazzi/parallel.hpp"

namespace codazzi {

namespace {
constexpr double kExcluded = std::numeric_limits<double>::quiet_NaN();
}

ResidualReport reduce_residuals(std::string name, const Grid& grid,
                                const std::vector<double>& per_node, double tolerance) {
    ResidualReport r;
    r.name = std::move(name);
    r.grid_counts = grid.counts();
    r.tolerance = tolerance;
    double sum = 0.0;
    int argmax = -1;
    for (int i = 0; i < static_cast<int>(per_node.size()); ++i) {
        const double v = per_node[i];
        if (std::isnan(v)) {
            ++r.excluded_count;
            continue;
        }
        ++r.included_count;
        sum += v;
        if (v > r.max_residual || argmax < 0) {
            r.max_residual = std::max(v, 0.0);
            argmax = i;
        }
    }
    if (r.included_count > 0) {
        r.mean_residual = sum / r.included_count;
        r.argmax = grid.point(argmax);
    }
    r.pass = r.max_residual < tolerance;
    return r;
}

double Tolerances::by_name(const std::string& name) const {
    if (name == "codazzi") return codazzi;
    if (name == "lemma") return lemma;
    if (name == "condition") return condition;
    if (name == "cluster") return cluster;
    if (name == "collision") return collision;
    if (name == "sigma_rel") return sigma_rel;
    if (name == "grad_rel") return grad_rel;
    if (name == "align") return align;
    if (name == "fd_rel") return fd_rel;
    if (name == "characteristics") return characteristics;
    if (name == "warp") return warp;
    throw ConfigError("unknown tolerance '" + name + "'");
}

void Tolerances::set_by_name(const std::string& name, double value) {
    if (value <= 0.0) throw ConfigError("tolerance '" + name + "' must be positive");
    if (name == "codazzi") codazzi = value;
    else if (name == "lemma") lemma = value;
    else if (name == "condition") condition = value;
    else if (name == "cluster") cluster = value;
    else if (name == "collision") collision = value;
    else if (name == "sigma_rel") sigma_rel = value;
    else if (name == "grad_rel") grad_rel = value;
    else if (name == "align") align = value;
    else if (name == "fd_rel") fd_rel = value;
    else if (name == "characteristics") characteristics = value;
    else if (name == "warp") warp = value;
    else throw ConfigError("unknown tolerance '" + name + "'");
}

std::vector<std::string> Tolerances::names() {
    return {"codazzi", "lemma",    "condition", "cluster", "collision", "sigma_rel",
            "grad_rel", "align",   "fd_rel",    "characteristics", "warp"};
}

ResidualReport codazzi_residual(const SymTensorField& A, const MetricField& g, const Grid& grid,
                                double tolerance) {
    const int n = g.dim();
    std::vector<double> per_node(grid.size(), kExcluded);

    parallel_for(grid.size(), [&](int idx) {
        const Point p = grid.point(idx);
        try {
            const Christoffels gamma = christoffel_at(g, p);
            const auto jets = A.jets_at(p);
            const Eigen::MatrixXd aval = SymTensorField::value_matrix(jets, n);

            // (∇_i A)(j,k) for all i
            std::vector<Eigen::MatrixXd> nabla(n);
            for (int i = 0; i < n; ++i) {
                Eigen::MatrixXd d = SymTensorField::derivative_matrix(jets, i, n);
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        for (int m = 0; m < n; ++m)
                            d(j, k) -= gamma(m, i, j) * aval(m, k) + gamma(m, i, k) * aval(j, m);
                nabla[i] = std::move(d);
            }

            double worst = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        worst = std::max(worst, std::abs(nabla[i](j, k) - nabla[j](i, k)));
            per_node[idx] = worst;
        } catch (const Error&) {
            // degenerate or non-evaluable node: excluded, counted
        }
    });

    return reduce_residuals("codazzi", grid, per_node, tolerance);
}

namespace {

struct NodeContext {
    Point p;
    Eigen::MatrixXd gmat, ginv, amat;
    Christoffels gamma;
    EigenDerivatives deriv;
    const PointEigen* pe = nullptr;

    Eigen::VectorXd cov_deriv_col(int axis, int col) const {
        // covariant derivative of the locally extended eigenvector field
        Eigen::VectorXd r = deriv.dframe[axis].col(col);
        for (int k = 0; k < gmat.rows(); ++k)
            r[k] += gamma.by_upper[k].row(axis).dot(pe->frame.col(col));
        return r;
    }
};

bool build_context(const SymTensorField& A, const MetricField& g, const Grid& grid, int idx,
                   const EigenStructure& eig, const Tolerances& tol, bool with_frames,
                   NodeContext& ctx) {
    const PointEigen& pe = eig.nodes[idx];
    if (!pe.included) return false;
    ctx.p = grid.point(idx);
    try {
        ctx.gmat = g.value_at(ctx.p);
        Eigen::LLT<Eigen::MatrixXd> llt(ctx.gmat);
        ctx.ginv = llt.solve(Eigen::MatrixXd::Identity(ctx.gmat.rows(), ctx.gmat.cols()));
        ctx.amat = A.value_at(ctx.p);
        ctx.gamma = christoffel_at(g, ctx.p);
    } catch (const Error&) {
        return false;
    }
    ctx.deriv = eigen_derivatives(A, g, grid, ctx.p, pe, tol.cluster, tol.fd_rel, with_frames);
    if (!ctx.deriv.ok) return false;
    ctx.pe = &pe;
    return true;
}

double lemma_same_residual(const NodeContext& ctx) {
    const PointEigen& pe = *ctx.pe;
    const double lambda = pe.lambda();
    const auto cols = pe.lambda_cols();
    const Eigen::MatrixXd a11 = ctx.ginv * ctx.amat;
    const Eigen::VectorXd grad_lambda = ctx.ginv * ctx.deriv.dlambda;

    double worst = 0.0;
    for (std::size_t a = 0; a < cols.size(); ++a) {
        const Eigen::VectorXd X = pe.frame.col(cols[a]);
        for (std::size_t b = 0; b < cols.size(); ++b) {
            const Eigen::VectorXd Y = pe.frame.col(cols[b]);
            Eigen::VectorXd W = Eigen::VectorXd::Zero(X.size());
            for (int m = 0; m < X.size(); ++m) W += Y[m] * ctx.cov_deriv_col(m, cols[a]);
            const double dY_lambda = ctx.deriv.dlambda.dot(Y);
            const double gXY = a == b ? 1.0 : 0.0;
            const Eigen::VectorXd r = a11 * W - lambda * W - dY_lambda * X + gXY * grad_lambda;
            worst = std::max(worst, MetricField::norm(ctx.gmat, r));
        }
    }
    return worst;
}

double lemma_constant_residual(const NodeContext& ctx) {
    const auto cols = ctx.pe->lambda_cols();
    double s = 0.0;
    for (int c : cols) {
        const double comp = ctx.deriv.dlambda.dot(ctx.pe->frame.col(c));
        s += comp * comp;
    }
    return std::sqrt(s);
}

double lemma_integrable_residual(const NodeContext& ctx) {
    const PointEigen& pe = *ctx.pe;
    const auto cols = pe.lambda_cols();
    const Eigen::VectorXd gv = ctx.gmat * pe.frame.col(pe.simple_col());
    double worst = 0.0;
    for (std::size_t a = 0; a < cols.size(); ++a) {
        for (std::size_t b = a + 1; b < cols.size(); ++b) {
            const Eigen::VectorXd X = pe.frame.col(cols[a]);
            const Eigen::VectorXd Y = pe.frame.col(cols[b]);
            Eigen::VectorXd bracket = Eigen::VectorXd::Zero(X.size());
            for (int m = 0; m < X.size(); ++m)
                bracket += X[m] * ctx.deriv.dframe[m].col(cols[b]) -
                           Y[m] * ctx.deriv.dframe[m].col(cols[a]);
            worst = std::max(worst, std::abs(bracket.dot(gv)));
        }
    }
    return worst;
}

double lemma_derivative_residual(const NodeContext& ctx) {
    const PointEigen& pe = *ctx.pe;
    const double gap = pe.lambda() - pe.mu();
    const auto cols = pe.lambda_cols();
    const int simple = pe.simple_col();
    const Eigen::VectorXd v = pe.frame.col(simple);
    const Eigen::VectorXd gv = ctx.gmat * v;

    double s = 0.0;
    for (int c : cols) {
        const double dY_mu = ctx.deriv.dmu.dot(pe.frame.col(c));
        Eigen::VectorXd nabla_v_Y = Eigen::VectorXd::Zero(v.size());
        for (int m = 0; m < v.size(); ++m) nabla_v_Y += v[m] * ctx.cov_deriv_col(m, c);
        const double diff = dY_mu - gap * nabla_v_Y.dot(gv);
        s += diff * diff;
    }
    return std::sqrt(s);
}

} // namespace

ResidualReport lemma_residual(LemmaId id, const SymTensorField& A, const MetricField& g,
                              const EigenStructure& eig, const Grid& grid, const Tolerances& tol) {
    std::vector<double> per_node(grid.size(), kExcluded);
    const bool needs_frames = id != LemmaId::Constant;

    parallel_for(grid.size(), [&](int idx) {
        NodeContext ctx;
        if (!build_context(A, g, grid, idx, eig, tol, needs_frames, ctx)) return;
        switch (id) {
            case LemmaId::Same: per_node[idx] = lemma_same_residual(ctx); break;
            case LemmaId::Constant: per_node[idx] = lemma_constant_residual(ctx); break;
            case LemmaId::Integrable: per_node[idx] = lemma_integrable_residual(ctx); break;
            case LemmaId::Derivative: per_node[idx] = lemma_derivative_residual(ctx); break;
        }
    });

    const char* names[] = {"lemma_same", "lemma_constant", "lemma_integrable", "lemma_derivative"};
    return reduce_residuals(names[static_cast<int>(id)], grid, per_node, tol.lemma);
}

CharConditions char_conditions(const SymTensorField& A, const MetricField& g,
                               const EigenStructure& eig, const Grid& grid,
                               const Tolerances& tol) {
    const int n = g.dim();
    std::array<std::vector<double>, 4> per_node;
    for (auto& v : per_node) v.assign(grid.size(), kExcluded);

    parallel_for(grid.size(), [&](int idx) {
        NodeContext ctx;
        if (!build_context(A, g, grid, idx, eig, tol, true, ctx)) return;
        const PointEigen& pe = *ctx.pe;
        const auto cols = pe.lambda_cols();
        const int simple = pe.simple_col();
        const Eigen::VectorXd v = pe.frame.col(simple);

        // 1: exact coordinate gradient of tr A = tr(g^(-1) A) from the jets
        {
            const auto aj = A.jets_at(ctx.p);
            const auto gj = g.tensor().jets_at(ctx.p);
            Eigen::VectorXd dtrace(n);
            for (int m = 0; m < n; ++m) {
                const Eigen::MatrixXd dA = SymTensorField::derivative_matrix(aj, m, n);
                const Eigen::MatrixXd dG = SymTensorField::derivative_matrix(gj, m, n);
                dtrace[m] =
                    (ctx.ginv * dA - ctx.ginv * dG * ctx.ginv * ctx.amat).trace();
            }
            double s = 0.0;
            for (int c : cols) {
                const double comp = dtrace.dot(pe.frame.col(c));
                s += comp * comp;
            }
            per_node[0][idx] = std::sqrt(s);
        }

        // 2: FD gradient of mu projected onto V_lambda
        {
            double s = 0.0;
            for (int c : cols) {
                const double comp = ctx.deriv.dmu.dot(pe.frame.col(c));
                s += comp * comp;
            }
            per_node[1][idx] = std::sqrt(s);
        }

        // 3: geodesic defect of the unit mu-eigenvector field
        {
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
            for (int m = 0; m < n; ++m) acc += v[m] * ctx.cov_deriv_col(m, simple);
            per_node[2][idx] = MetricField::norm(ctx.gmat, acc);
        }

        // 4: asymmetry of T_ab = g(∇_{∂a} v_mu, ∂b) over coordinate pairs
        {
            Eigen::MatrixXd T(n, n);
            for (int a = 0; a < n; ++a) {
                const Eigen::VectorXd da = ctx.cov_deriv_col(a, simple);
                T.row(a) = (ctx.gmat * da).transpose();
            }
            double worst = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    worst = std::max(worst, std::abs(T(a, b) - T(b, a)));
            per_node[3][idx] = worst;
        }
    });

    CharConditions out;
    const char* names[] = {"cond_trace_leafwise_constant", "cond_mu_leafwise_constant",
                           "cond_mu_curves_geodesic", "cond_gradient_field"};
    for (int c = 0; c < 4; ++c) {
        out.reports[c] = reduce_residuals(names[c], grid, per_node[c], tol.condition);
        out.holds[c] = out.reports[c].pass;
    }
    out.vacuous = out.reports[0].included_count == 0;
    out.agree = out.holds[0] == out.holds[1] && out.holds[1] == out.holds[2] &&
                out.holds[2] == out.holds[3];
    out.all_true = out.holds[0] && out.holds[1] && out.holds[2] && out.holds[3];
    return out;
}

} // namespace codazzi
