#pragma once

#include <vector>

#include "codazzi/connection.hpp"

namespace codazzi {

struct Trajectory {
    std::vector<Point> points;
    std::vector<Eigen::VectorXd> velocities;
    /// max ‖∇_ẋ ẋ‖_g, measured by central differences of the computed
    /// velocity sequence plus the Γ v v term (an integration-error gauge,
    /// independent of the ODE right-hand side).
    double max_geodesic_residual = 0.0;
};

/// Classical fixed-step RK4 on ẍ^k + Γ^k_{ij} ẋ^i ẋ^j = 0. Throws
/// LeftDomain when the trajectory exits a non-periodic axis interval;
/// periodic axes wrap.
Trajectory integrate_geodesic(const MetricField& g, const Point& p0, const Eigen::VectorXd& v0,
                              double step, int n_steps);

} // namespace codazzi
