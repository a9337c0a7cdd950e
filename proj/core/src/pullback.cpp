#include "codazzi/pullback.hpp"

#include <cmath>

namespace codazzi {

Eigen::MatrixXd pullback_metric(const CoordinateMap& phi, const MetricField& g, const Point& p,
                                double jacobian_tol) {
    const int ns = phi.source.dim();
    const int nt = g.dim();
    if (static_cast<int>(phi.components.size()) != nt)
        throw ConfigError("coordinate map arity does not match target chart");

    Point image(nt);
    Eigen::MatrixXd jac(nt, ns); // jac(i, a) = ∂_a φ^i
    for (int i = 0; i < nt; ++i) {
        const Jet2 j = phi.components[i].jet_at(p);
        image[i] = j.value;
        jac.row(i) = j.grad.transpose();
    }

    if (ns == nt) {
        if (std::abs(jac.determinant()) < jacobian_tol)
            throw SingularJacobian(phi.source.describe_point(p));
    }

    const Point wrapped = g.chart().wrap(image);
    if (!g.chart().contains(wrapped))
        throw DomainError("coordinate map image", g.chart().describe_point(image));

    const Eigen::MatrixXd gm = g.value_at(wrapped);
    return jac.transpose() * gm * jac;
}

} // namespace codazzi
