#include "codazzi/connection.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace codazzi {

Christoffels christoffel_at(const MetricField& g, const Point& p) {
    const int n = g.dim();
    const auto jets = g.tensor().jets_at(p);

    Eigen::MatrixXd gmat = SymTensorField::value_matrix(jets, n);
    Eigen::LLT<Eigen::MatrixXd> llt(gmat);
    if (llt.info() != Eigen::Success) throw DegenerateMetric(g.chart().describe_point(p));
    const Eigen::MatrixXd ginv = llt.solve(Eigen::MatrixXd::Identity(n, n));

    std::vector<Eigen::MatrixXd> dg(n);
    for (int l = 0; l < n; ++l) dg[l] = SymTensorField::derivative_matrix(jets, l, n);

    Christoffels gamma;
    gamma.by_upper.assign(n, Eigen::MatrixXd::Zero(n, n));
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gamma.by_upper[k](i, j) = gamma.by_upper[k](j, i) = 0.5 * s;
            }
        }
    }
    return gamma;
}

Christoffels christoffel_family_closed_form(double lambda, const ScalarExpr& mu, const Point& p,
                                            double collision_tol) {
    const int n = static_cast<int>(p.size());
    const Jet2 mj = mu.jet_at(p);
    const double d = lambda - mj.value;
    if (std::abs(d) < collision_tol)
        throw EigenvalueCollision("lambda - mu vanishes at the evaluation point");

    Christoffels gamma;
    gamma.by_upper.assign(n, Eigen::MatrixXd::Zero(n, n));
    gamma.by_upper[0](0, 0) = mj.grad[0] / d;
    for (int i = 1; i < n; ++i) {
        gamma.by_upper[i](0, 0) = -mj.grad[i] / (lambda * d * d * d);
        gamma.by_upper[0](i, 0) = gamma.by_upper[0](0, i) = mj.grad[i] / d;
    }
    return gamma;
}

Eigen::MatrixXd covariant_derivative_tensor(const SymTensorField& T, const MetricField& g,
                                            int direction, const Point& p) {
    const int n = g.dim();
    const Christoffels gamma = christoffel_at(g, p);
    const auto jets = T.jets_at(p);
    const Eigen::MatrixXd tval = SymTensorField::value_matrix(jets, n);
    const Eigen::MatrixXd dT = SymTensorField::derivative_matrix(jets, direction, n);

    Eigen::MatrixXd r(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            double s = dT(j, k);
            for (int m = 0; m < n; ++m)
                s -= gamma(m, direction, j) * tval(m, k) + gamma(m, direction, k) * tval(j, m);
            r(j, k) = s;
        }
    }
    return r;
}

Eigen::VectorXd covariant_derivative_vector(const VectorFieldExpr& V, const MetricField& g,
                                            int direction, const Point& p) {
    const int n = g.dim();
    const Christoffels gamma = christoffel_at(g, p);
    Eigen::VectorXd val(n), dv(n);
    for (int k = 0; k < n; ++k) {
        const Jet2 j = V[k].jet_at(p);
        val[k] = j.value;
        dv[k] = j.grad[direction];
    }
    Eigen::VectorXd r(n);
    for (int k = 0; k < n; ++k) {
        double s = dv[k];
        for (int m = 0; m < n; ++m) s += gamma(k, direction, m) * val[m];
        r[k] = s;
    }
    return r;
}

Eigen::VectorXd covariant_derivative_along(const VectorFieldExpr& V, const VectorFieldExpr& W,
                                           const MetricField& g, const Point& p) {
    const int n = g.dim();
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (int m = 0; m < n; ++m) {
        const double vm = V[m].value_at(p);
        if (vm == 0.0) continue;
        r += vm * covariant_derivative_vector(W, g, m, p);
    }
    return r;
}

Eigen::MatrixXd hessian_scalar(const ScalarExpr& f, const MetricField& g, const Point& p) {
    const int n = g.dim();
    const Christoffels gamma = christoffel_at(g, p);
    const Jet2 fj = f.jet_at(p);

    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = fj.hess(i, j);
            for (int k = 0; k < n; ++k) s -= gamma(k, i, j) * fj.grad[k];
            h(i, j) = h(j, i) = s;
        }
    }
    return h;
}

Eigen::MatrixXd hessian_family_closed_form(double lambda, const ScalarExpr& mu,
                                           const ScalarExpr& f, const Point& p,
                                           double collision_tol) {
    const int n = static_cast<int>(p.size());
    const Jet2 mj = mu.jet_at(p);
    const Jet2 fj = f.jet_at(p);
    const double d = lambda - mj.value;
    if (std::abs(d) < collision_tol)
        throw EigenvalueCollision("lambda - mu vanishes at the evaluation point");

    Eigen::MatrixXd h(n, n);
    // spatial block: plain second partials (all spatial Christoffels vanish)
    for (int i = 1; i < n; ++i)
        for (int j = i; j < n; ++j) h(i, j) = h(j, i) = fj.hess(i, j);

    double spatial = 0.0;
    for (int i = 1; i < n; ++i) spatial += fj.grad[i] * mj.grad[i];
    h(0, 0) = fj.hess(0, 0) - mj.grad[0] * fj.grad[0] / d + spatial / (lambda * d * d * d);
    for (int i = 1; i < n; ++i)
        h(0, i) = h(i, 0) = fj.hess(0, i) - mj.grad[i] * fj.grad[0] / d;
    return h;
}

Eigen::VectorXd lie_bracket(const VectorFieldExpr& V, const VectorFieldExpr& W, const Point& p) {
    const int n = static_cast<int>(V.size());
    Eigen::VectorXd v(n), w(n);
    std::vector<Jet2> vj, wj;
    vj.reserve(n);
    wj.reserve(n);
    for (int k = 0; k < n; ++k) {
        vj.push_back(V[k].jet_at(p));
        wj.push_back(W[k].jet_at(p));
        v[k] = vj[k].value;
        w[k] = wj[k].value;
    }
    Eigen::VectorXd r(n);
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += v[m] * wj[k].grad[m] - w[m] * vj[k].grad[m];
        r[k] = s;
    }
    return r;
}

} // namespace codazzi
