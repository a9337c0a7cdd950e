#include "codazzi/geodesic.hpp"

namespace codazzi {

namespace {

Eigen::VectorXd acceleration(const MetricField& g, const Point& x, const Eigen::VectorXd& v) {
    const Christoffels gamma = christoffel_at(g, x);
    const int n = g.dim();
    Eigen::VectorXd a(n);
    for (int k = 0; k < n; ++k) a[k] = -v.dot(gamma.by_upper[k] * v);
    return a;
}

} // namespace

Trajectory integrate_geodesic(const MetricField& g, const Point& p0, const Eigen::VectorXd& v0,
                              double step, int n_steps) {
    const Chart& chart = g.chart();
    Trajectory traj;
    traj.points.reserve(n_steps + 1);
    traj.velocities.reserve(n_steps + 1);

    Point x = chart.wrap(p0);
    Eigen::VectorXd v = v0;
    if (!chart.contains(x)) throw LeftDomain(0, chart.describe_point(x));
    traj.points.push_back(x);
    traj.velocities.push_back(v);

    for (int s = 1; s <= n_steps; ++s) {
        const Eigen::VectorXd k1x = v;
        const Eigen::VectorXd k1v = acceleration(g, x, v);
        const Eigen::VectorXd k2x = v + 0.5 * step * k1v;
        const Eigen::VectorXd k2v = acceleration(g, chart.wrap(x + 0.5 * step * k1x), k2x);
        const Eigen::VectorXd k3x = v + 0.5 * step * k2v;
        const Eigen::VectorXd k3v = acceleration(g, chart.wrap(x + 0.5 * step * k2x), k3x);
        const Eigen::VectorXd k4x = v + step * k3v;
        const Eigen::VectorXd k4v = acceleration(g, chart.wrap(x + step * k3x), k4x);

        x = chart.wrap(x + (step / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x));
        v += (step / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!chart.contains(x)) throw LeftDomain(s, chart.describe_point(x));
        traj.points.push_back(x);
        traj.velocities.push_back(v);
    }

    for (std::size_t s = 1; s + 1 < traj.points.size(); ++s) {
        const Eigen::VectorXd dv =
            (traj.velocities[s + 1] - traj.velocities[s - 1]) / (2.0 * step);
        const Christoffels gamma = christoffel_at(g, traj.points[s]);
        Eigen::VectorXd resid = dv;
        for (int k = 0; k < g.dim(); ++k)
            resid[k] += traj.velocities[s].dot(gamma.by_upper[k] * traj.velocities[s]);
        const Eigen::MatrixXd gm = g.value_at(traj.points[s]);
        traj.max_geodesic_residual =
            std::max(traj.max_geodesic_residual, MetricField::norm(gm, resid));
    }
    return traj;
}

} // namespace codazzi
