#include "codazzi/family.hpp"

#include <cmath>
#include <limits>

#include "codazzi/parallel.hpp"

namespace codazzi {

FamilyInstance build_family(double lambda, const ScalarExpr& mu, const Chart& chart,
                            double collision_tol, int collision_sweep_n) {
    chart.validate();
    if (chart.dim() != 3 || chart.coords != std::vector<std::string>{"t", "x", "y"})
        throw ConfigError("family instances live on the chart {t, x, y}");
    if (!(lambda > 0.0)) throw BadParams("family lambda must be positive");

    const Grid sweep(chart, GridSpec::uniform(collision_sweep_n, 3));
    for (int i = 0; i < sweep.size(); ++i) {
        const Point p = sweep.point(i);
        if (std::abs(lambda - mu.value_at(p)) < collision_tol)
            throw EigenvalueCollision("lambda - mu vanishes on the box at " +
                                      chart.describe_point(p));
    }

    const int n = 3;
    const ScalarExpr lam = ScalarExpr::constant(lambda, n);
    const ScalarExpr gtt = powc(lam - mu, -2.0);

    SymTensorField gt = SymTensorField::zero(chart);
    gt.set_entry(0, 0, gtt);
    gt.set_entry(1, 1, lam);
    gt.set_entry(2, 2, lam);

    SymTensorField at = SymTensorField::zero(chart);
    at.set_entry(0, 0, mu * gtt);
    at.set_entry(1, 1, ScalarExpr::constant(lambda * lambda, n));
    at.set_entry(2, 2, ScalarExpr::constant(lambda * lambda, n));

    return FamilyInstance{lambda, mu, chart, MetricField(std::move(gt)), std::move(at)};
}

ScalarExpr mu_form(int k, const MuFormParams& p, const ScalarExpr& G) {
    const int n = 3;
    const ScalarExpr x = ScalarExpr::variable(1, "x", n);
    const ScalarExpr y = ScalarExpr::variable(2, "y", n);
    auto C = [&](double v) { return ScalarExpr::constant(v, n); };
    auto compose = [&](const ScalarExpr& inner) { return G.substitute(0, inner); };

    switch (k) {
        case 1: {
            const ScalarExpr denom =
                C(1.0) - C(p.c3) * x - C(p.c4) * y - C(p.c2) * (x * x + y * y);
            return C(1.0) + C(p.c1) / denom;
        }
        case 2: {
            if (p.a == 0.0 || p.b == 0.0) throw BadParams("form 2 needs a != 0 and b != 0");
            const ScalarExpr inner = (C(p.c) + C(p.a) * y) / (C(p.a) * (C(p.b) + C(p.a) * x));
            return (C(p.a) * x + compose(inner)) / (C(p.a) * x + C(p.b));
        }
        case 3: {
            if (p.a == 0.0) throw BadParams("form 3 needs a != 0");
            const ScalarExpr inner = x / (C(p.c) + C(p.a) * y);
            return (C(p.a) * y + compose(inner)) / (C(p.c) + C(p.a) * y);
        }
        case 4: {
            if (p.b == 0.0) throw BadParams("form 4 needs b != 0");
            return compose((C(p.b) * y - C(p.c) * x) / C(p.b));
        }
        case 5:
            return compose(x);
        case 6:
            return compose(y);
        default:
            throw BadParams("mu form index must be 1..6");
    }
}

ResidualReport characteristics_residual(const ScalarExpr& mu, double a, double b, double c,
                                        const Chart& chart, const Grid& grid, double tolerance) {
    (void)chart;
    std::vector<double> per_node(grid.size(), std::numeric_limits<double>::quiet_NaN());
    parallel_for(grid.size(), [&](int idx) {
        const Point p = grid.point(idx);
        try {
            const Jet2 mj = mu.jet_at(p);
            const double lhs = (a * p[1] + b) * mj.grad[1] + (a * p[2] + c) * mj.grad[2];
            per_node[idx] = std::abs(lhs - a * (1.0 - mj.value));
        } catch (const Error&) {
        }
    });
    return reduce_residuals("characteristics", grid, per_node, tolerance);
}

} // namespace codazzi
