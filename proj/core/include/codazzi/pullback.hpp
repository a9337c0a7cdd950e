#pragma once

#include "codazzi/connection.hpp"

namespace codazzi {

/// Coordinate map φ: source chart -> target chart, each target coordinate a
/// ScalarExpr over the source coordinates.
struct CoordinateMap {
    Chart source;
    std::vector<ScalarExpr> components; // one per target coordinate
};

/// (φ*g)_ab = ∂_a φ^i ∂_b φ^j g_ij(φ(p)). Throws SingularJacobian when
/// |det Dφ(p)| falls below `jacobian_tol` and DomainError when φ(p) leaves
/// the target chart.
Eigen::MatrixXd pullback_metric(const CoordinateMap& phi, const MetricField& g, const Point& p,
                                double jacobian_tol = 1e-12);

} // namespace codazzi
