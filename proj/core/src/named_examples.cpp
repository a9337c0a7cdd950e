#include "codazzi/named_examples.hpp"

#include <cmath>

namespace codazzi {

namespace {

const double kTwoPi = 2.0 * M_PI;

std::vector<std::string> txy() { return {"t", "x", "y"}; }

Point point3(double t, double x, double y) {
    Point p(3);
    p << t, x, y;
    return p;
}

NamedExample from_family(std::string id, FamilyInstance fam, GridSpec grid, Point probe) {
    NamedExample ex{std::move(id), fam.g, fam.A, std::move(grid), std::move(probe), std::move(fam)};
    return ex;
}

} // namespace

NamedExample named_example(const std::string& id) {
    if (id == "flat") {
        // distinct axis lengths; see header
        Chart chart = make_chart_txy({0.0, 1.0}, {0.0, 1.15}, {0.0, 1.35});
        MetricField g = MetricField::euclidean(chart);
        SymTensorField A = g.tensor();
        return NamedExample{id, std::move(g), std::move(A), GridSpec::uniform(7, 3),
                            point3(0.5, 0.5, 0.5), std::nullopt};
    }
    if (id == "parallel_shift") {
        Chart chart = make_chart_txy({0.0, 1.0}, {0.0, 1.15}, {0.0, 1.35});
        MetricField g = MetricField::euclidean(chart);
        SymTensorField A = g.tensor();
        A.set_entry(0, 0, ScalarExpr::constant(2.0, 3));
        return NamedExample{id, std::move(g), std::move(A), GridSpec::uniform(7, 3),
                            point3(0.5, 0.5, 0.5), std::nullopt};
    }
    if (id == "torus") {
        Chart chart = make_chart_txy({0.0, kTwoPi}, {0.0, kTwoPi}, {0.0, kTwoPi}, true);
        ScalarExpr mu = parse("0.5*sin(x)*cos(y)", txy());
        return from_family(id, build_family(1.0, mu, chart), GridSpec::uniform(11, 3),
                           point3(0.0, 0.0, 0.0));
    }
    if (id == "inconsistent_warp") {
        Chart chart = make_chart_txy({0.0, 1.0}, {0.5, 1.5}, {0.5, 1.5});
        ScalarExpr mu = parse("1 + y/x^2", txy());
        return from_family(id, build_family(1.0, mu, chart), GridSpec::uniform(7, 3),
                           point3(0.0, 1.0, 1.0));
    }
    if (id == "warped_consistent") {
        Chart chart = make_chart_txy({0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0});
        const auto vars = txy();
        SymTensorField gt = SymTensorField::zero(chart);
        gt.set_entry(0, 0, ScalarExpr::constant(1.0, 3));
        gt.set_entry(1, 1, parse("exp(2*t)", vars));
        gt.set_entry(2, 2, parse("exp(2*t)", vars));
        SymTensorField A = SymTensorField::zero(chart);
        A.set_entry(0, 0, parse("2*exp(t)", vars));      // mu * g_tt
        A.set_entry(1, 1, parse("exp(3*t)", vars));      // lambda * g_xx
        A.set_entry(2, 2, parse("exp(3*t)", vars));
        return NamedExample{id, MetricField(std::move(gt)), std::move(A), GridSpec::uniform(11, 3),
                            point3(0.5, 0.5, 0.5), std::nullopt};
    }
    if (id == "mu_of_t") {
        Chart chart = make_chart_txy({0.3, 1.3}, {0.0, 1.0}, {0.0, 1.0});
        ScalarExpr mu = parse("1 + t", txy());
        return from_family(id, build_family(1.0, mu, chart), GridSpec::uniform(7, 3),
                           point3(0.8, 0.5, 0.5));
    }
    if (id == "mu_xy") {
        Chart chart = make_chart_txy({0.0, 1.0}, {0.8, 1.2}, {1.8, 2.2});
        ScalarExpr mu = parse("x*y", txy());
        return from_family(id, build_family(1.0, mu, chart), GridSpec::uniform(7, 3),
                           point3(0.0, 1.0, 2.0));
    }
    throw ConfigError("unknown named example '" + id + "'");
}

std::vector<std::string> named_example_ids() {
    return {"flat",       "parallel_shift",    "torus", "inconsistent_warp",
            "warped_consistent", "mu_of_t", "mu_xy"};
}

} // namespace codazzi
