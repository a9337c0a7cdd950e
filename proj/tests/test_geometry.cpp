#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <codazzi/connection.hpp>
#include <codazzi/family.hpp>
#include <codazzi/geodesic.hpp>
#include <codazzi/pullback.hpp>

using namespace codazzi;

namespace {

const std::vector<std::string> kTxy = {"t", "x", "y"};

Point pt(double t, double x, double y) {
    Point p(3);
    p << t, x, y;
    return p;
}

Chart box_txy(double lo = 0.0, double hi = 4.0) {
    return make_chart_txy({lo, hi}, {lo, hi}, {lo, hi});
}

MetricField family_metric(double lambda, const std::string& mu_text, const Chart& chart) {
    return build_family(lambda, parse(mu_text, kTxy), chart).g;
}

// FD oracle for first derivatives of metric entries, used to cross-check the
// AD-based Christoffel assembly.
Christoffels christoffel_fd(const MetricField& g, const Point& p, double h = 1e-5) {
    const int n = g.dim();
    const Eigen::MatrixXd ginv = g.inverse_at(p);
    std::vector<Eigen::MatrixXd> dg(n);
    for (int l = 0; l < n; ++l) {
        Point up = p, dn = p;
        up[l] += h;
        dn[l] -= h;
        dg[l] = (g.tensor().value_at(up) - g.tensor().value_at(dn)) / (2 * h);
    }
    Christoffels gamma;
    gamma.by_upper.assign(n, Eigen::MatrixXd::Zero(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int l = 0; l < n; ++l)
                    s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gamma.by_upper[k](i, j) = 0.5 * s;
            }
    return gamma;
}

double max_diff(const Christoffels& a, const Christoffels& b) {
    double m = 0;
    for (int k = 0; k < a.dim(); ++k)
        m = std::max(m, (a.by_upper[k] - b.by_upper[k]).cwiseAbs().maxCoeff());
    return m;
}

} // namespace

TEST_CASE("christoffel: Euclidean metric has vanishing symbols") {
    const MetricField g = MetricField::euclidean(box_txy());
    const Christoffels gamma = christoffel_at(g, pt(1.0, 2.0, 3.0));
    for (int k = 0; k < 3; ++k) CHECK(gamma.by_upper[k].cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("christoffel: family mu = x*y at (0,1,2) matches the closed forms") {
    Chart chart = make_chart_txy({0.0, 1.0}, {0.8, 1.2}, {1.8, 2.2});
    const MetricField g = family_metric(1.0, "x*y", chart);
    const Christoffels gamma = christoffel_at(g, pt(0, 1, 2));

    // lambda - mu = -1, d_x mu = 2, d_y mu = 1
    CHECK(gamma(1, 0, 0) == doctest::Approx(2.0));   // Γ^x_tt
    CHECK(gamma(2, 0, 0) == doctest::Approx(1.0));   // Γ^y_tt
    CHECK(gamma(0, 1, 0) == doctest::Approx(-2.0));  // Γ^t_xt
    CHECK(gamma(0, 2, 0) == doctest::Approx(-1.0));  // Γ^t_yt
    CHECK(gamma(0, 0, 0) == doctest::Approx(0.0));   // Γ^t_tt

    const Christoffels closed =
        christoffel_family_closed_form(1.0, parse("x*y", kTxy), pt(0, 1, 2));
    CHECK(max_diff(gamma, closed) < 1e-12);
}

TEST_CASE("christoffel: polar plane at r = 2 (textbook values, FD cross-check)") {
    Chart polar;
    polar.coords = {"r", "th"};
    polar.domain = {{0.5, 3.0}, {0.0, 2.0 * M_PI}};
    polar.periodic = {false, true};
    SymTensorField gt = SymTensorField::zero(polar);
    gt.set_entry(0, 0, ScalarExpr::constant(1.0, 2));
    gt.set_entry(1, 1, parse("r^2", polar.coords));
    const MetricField g{std::move(gt)};

    Point p(2);
    p << 2.0, 1.0;
    const Christoffels gamma = christoffel_at(g, p);
    CHECK(gamma(0, 1, 1) == doctest::Approx(-2.0));  // Γ^r_thth = -r
    CHECK(gamma(1, 0, 1) == doctest::Approx(0.5));   // Γ^th_rth = 1/r
    CHECK(max_diff(gamma, christoffel_fd(g, p)) < 1e-9);
}

TEST_CASE("christoffel closed form: constant mu kills every symbol") {
    const Christoffels gamma =
        christoffel_family_closed_form(1.0, ScalarExpr::constant(0.0, 3), pt(0.3, 0.7, 0.1));
    for (int k = 0; k < 3; ++k) CHECK(gamma.by_upper[k].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("christoffel closed form: torus mu at a critical point of mu") {
    const Christoffels gamma = christoffel_family_closed_form(
        1.0, parse("0.5*sin(x)*cos(y)", kTxy), pt(0.0, M_PI / 2, 0.0));
    for (int k = 0; k < 3; ++k) CHECK(gamma.by_upper[k].cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("christoffel closed form: collision raises EigenvalueCollision") {
    CHECK_THROWS_AS(
        christoffel_family_closed_form(1.0, ScalarExpr::constant(1.0, 3), pt(0, 0, 0)),
        EigenvalueCollision);
}

TEST_CASE("property: closed-form and general Christoffels agree on family grids") {
    Chart torus = make_chart_txy({0.0, 2 * M_PI}, {0.0, 2 * M_PI}, {0.0, 2 * M_PI}, true);
    const ScalarExpr mu = parse("0.5*sin(x)*cos(y)", kTxy);
    const MetricField g = build_family(1.0, mu, torus).g;
    const Grid grid(torus, GridSpec::uniform(7, 3));
    double worst = 0;
    for (int i = 0; i < grid.size(); ++i) {
        const Point p = grid.point(i);
        worst = std::max(worst,
                         max_diff(christoffel_at(g, p), christoffel_family_closed_form(1.0, mu, p)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("property: Christoffel symmetry and metric compatibility on a battery") {
    std::vector<MetricField> battery;
    battery.push_back(MetricField::euclidean(box_txy()));
    battery.push_back(family_metric(1.0, "0.5*sin(x)*cos(y)",
                                    make_chart_txy({0, 2 * M_PI}, {0, 2 * M_PI}, {0, 2 * M_PI},
                                                   true)));
    battery.push_back(
        family_metric(1.0, "1 + y/x^2", make_chart_txy({0, 1}, {0.5, 1.5}, {0.5, 1.5})));

    std::mt19937 rng(5150);
    for (const MetricField& g : battery) {
        const Grid grid(g.chart(), GridSpec::uniform(5, 3));
        for (int trial = 0; trial < 25; ++trial) {
            std::uniform_int_distribution<int> pick(0, grid.size() - 1);
            const Point p = grid.point(pick(rng));
            const Christoffels gamma = christoffel_at(g, p);
            for (int k = 0; k < 3; ++k)
                CHECK((gamma.by_upper[k] - gamma.by_upper[k].transpose()).cwiseAbs().maxCoeff() ==
                      0.0);
            for (int dir = 0; dir < 3; ++dir) {
                const Eigen::MatrixXd nabla_g =
                    covariant_derivative_tensor(g.tensor(), g, dir, p);
                CHECK(nabla_g.cwiseAbs().maxCoeff() < 1e-9);
            }
        }
    }
}

TEST_CASE("covariant derivative: family tensor reproduces (d_x mu) g_tt") {
    Chart chart = make_chart_txy({0.0, 1.0}, {0.8, 1.2}, {1.8, 2.2});
    const FamilyInstance fam = build_family(1.0, parse("x*y", kTxy), chart);
    const Point p = pt(0, 1, 2);
    const Eigen::MatrixXd nabla_x_A = covariant_derivative_tensor(fam.A, fam.g, 1, p);
    // (∇_{∂x}A)(∂t,∂t) = (∂_x mu) g_tt = 2 * 1
    CHECK(nabla_x_A(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("covariant derivative: constant vector field on Euclidean chart") {
    const MetricField g = MetricField::euclidean(box_txy());
    VectorFieldExpr V = {ScalarExpr::constant(1.0, 3), ScalarExpr::constant(-2.0, 3),
                         ScalarExpr::constant(0.5, 3)};
    for (int dir = 0; dir < 3; ++dir)
        CHECK(covariant_derivative_vector(V, g, dir, pt(0.3, 0.4, 0.5)).cwiseAbs().maxCoeff() ==
              0.0);
}

TEST_CASE("hessian: quadratic on the Euclidean chart") {
    const MetricField g = MetricField::euclidean(box_txy());
    const Eigen::MatrixXd h = hessian_scalar(parse("x^2/2 + y^2/2", kTxy), g, pt(1, 2, 3));
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
    expected(1, 1) = expected(2, 2) = 1.0;
    CHECK((h - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hessian: Prop-1.2 metric has Hess((x^2+y^2)/2) = g") {
    Chart chart = make_chart_txy({0.0, 1.0}, {0.5, 1.5}, {0.5, 1.5});
    const MetricField g = family_metric(1.0, "1 + y/x^2", chart);
    const Point p = pt(0, 1, 1);
    const Eigen::MatrixXd h = hessian_scalar(parse("(x^2+y^2)/2", kTxy), g, p);
    CHECK((h - g.value_at(p)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hessian: family Hess t picks up the -Γ^t terms") {
    Chart chart = make_chart_txy({0.0, 1.0}, {0.8, 1.2}, {1.8, 2.2});
    const MetricField g = family_metric(1.0, "x*y", chart);
    const Eigen::MatrixXd h = hessian_scalar(parse("t", kTxy), g, pt(0, 1, 2));
    CHECK(h(0, 0) == doctest::Approx(0.0));
    CHECK(h(0, 1) == doctest::Approx(2.0)); // -Γ^t_tx = 2
    CHECK(h(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("property: hessian_scalar is symmetric and matches the family closed form") {
    Chart torus = make_chart_txy({0, 2 * M_PI}, {0, 2 * M_PI}, {0, 2 * M_PI}, true);
    const ScalarExpr mu = parse("0.5*sin(x)*cos(y)", kTxy);
    const MetricField g = build_family(1.0, mu, torus).g;
    const std::vector<ScalarExpr> fs = {parse("t + x^2 - 0.5*y", kTxy),
                                        parse("sin(t)*cos(x) + y", kTxy),
                                        parse("exp(0.25*x)*t", kTxy)};
    const Grid grid(torus, GridSpec::uniform(5, 3));
    double worst = 0;
    for (const ScalarExpr& f : fs) {
        for (int i = 0; i < grid.size(); ++i) {
            const Point p = grid.point(i);
            const Eigen::MatrixXd h = hessian_scalar(f, g, p);
            CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
            worst = std::max(
                worst, (h - hessian_family_closed_form(1.0, mu, f, p)).cwiseAbs().maxCoeff());
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("lie bracket: coordinate fields commute; [V,V] = 0; x∂y vs y∂x") {
    VectorFieldExpr dx = {ScalarExpr::constant(0, 3), ScalarExpr::constant(1, 3),
                          ScalarExpr::constant(0, 3)};
    VectorFieldExpr dy = {ScalarExpr::constant(0, 3), ScalarExpr::constant(0, 3),
                          ScalarExpr::constant(1, 3)};
    CHECK(lie_bracket(dx, dy, pt(0, 1, 2)).cwiseAbs().maxCoeff() == 0.0);

    VectorFieldExpr V = {ScalarExpr(3), ScalarExpr(3), parse("x", kTxy)}; // x ∂y
    VectorFieldExpr W = {ScalarExpr(3), parse("y", kTxy), ScalarExpr(3)}; // y ∂x
    const Eigen::VectorXd b = lie_bracket(V, W, pt(0, 1, 2));

    // FD oracle of the definition at p = (0,1,2)
    auto field_at = [&](const VectorFieldExpr& F, const Point& q) {
        Eigen::Vector3d v;
        for (int k = 0; k < 3; ++k) v[k] = F[k].value_at(q);
        return v;
    };
    Eigen::Vector3d fd = Eigen::Vector3d::Zero();
    const double h = 1e-6;
    const Point p = pt(0, 1, 2);
    for (int m = 0; m < 3; ++m) {
        Point up = p, dn = p;
        up[m] += h;
        dn[m] -= h;
        const Eigen::Vector3d dW = (field_at(W, up) - field_at(W, dn)) / (2 * h);
        const Eigen::Vector3d dV = (field_at(V, up) - field_at(V, dn)) / (2 * h);
        fd += field_at(V, p)[m] * dW - field_at(W, p)[m] * dV;
    }
    CHECK((b - fd).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(b[1] == doctest::Approx(1.0));  // x component: x = 1
    CHECK(b[2] == doctest::Approx(-2.0)); // y component: -y = -2

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> cd(-2, 2);
    for (int trial = 0; trial < 20; ++trial) {
        VectorFieldExpr R = {parse("sin(x)", kTxy) * ScalarExpr::constant(cd(rng), 3),
                             parse("t*y", kTxy) * ScalarExpr::constant(cd(rng), 3),
                             parse("x + y", kTxy) * ScalarExpr::constant(cd(rng), 3)};
        const Point q = pt(cd(rng), cd(rng), cd(rng));
        CHECK(lie_bracket(R, R, q).cwiseAbs().maxCoeff() == 0.0);
        CHECK((lie_bracket(R, V, q) + lie_bracket(V, R, q)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("geodesic: Euclidean straight line with zero residual") {
    const MetricField g = MetricField::euclidean(box_txy(0.0, 10.0));
    Eigen::VectorXd v0(3);
    v0 << 0.5, 0.25, 0.1;
    const Trajectory tr = integrate_geodesic(g, pt(1, 1, 1), v0, 0.05, 50);
    CHECK(tr.max_geodesic_residual < 1e-13);
    const Point end = tr.points.back();
    CHECK(end[0] == doctest::Approx(1.0 + 0.5 * 2.5));
}

TEST_CASE("geodesic: polar radial ray stays geodesic under RK4") {
    Chart polar;
    polar.coords = {"r", "th"};
    polar.domain = {{0.25, 5.0}, {0.0, 2.0 * M_PI}};
    polar.periodic = {false, true};
    SymTensorField gt = SymTensorField::zero(polar);
    gt.set_entry(0, 0, ScalarExpr::constant(1.0, 2));
    gt.set_entry(1, 1, parse("r^2", polar.coords));
    const MetricField g{std::move(gt)};

    Point p0(2);
    p0 << 0.5, 1.0;
    Eigen::VectorXd v0(2);
    v0 << 1.0, 0.0;
    const Trajectory tr = integrate_geodesic(g, p0, v0, 1e-2, 100);
    CHECK(tr.max_geodesic_residual < 1e-8);
}

TEST_CASE("geodesic: t-coordinate curve in a spatial-mu family is not geodesic") {
    Chart chart = make_chart_txy({0.0, 1.0}, {0.8, 1.2}, {1.8, 2.2});
    const FamilyInstance fam = build_family(1.0, parse("x*y", kTxy), chart);
    // unit-speed field along ∂t: X = |lambda - mu| ∂t (g_tt = (lambda-mu)^-2)
    VectorFieldExpr X = {ScalarExpr::constant(fam.lambda, 3) - fam.mu, ScalarExpr(3),
                         ScalarExpr(3)};
    const Point p = pt(0.5, 1.0, 2.0);
    const Eigen::VectorXd acc = covariant_derivative_along(X, X, fam.g, p);
    const Eigen::MatrixXd gm = fam.g.value_at(p);
    CHECK(std::abs(MetricField::inner(gm, acc, acc) - 0.0) > 1e-4); // ∇_X X != 0

    // same construction with mu = mu(t): the curve is geodesic
    Chart chart_t = make_chart_txy({0.3, 1.3}, {0.0, 1.0}, {0.0, 1.0});
    const FamilyInstance fam_t = build_family(1.0, parse("1 + t", kTxy), chart_t);
    VectorFieldExpr Xt = {ScalarExpr::constant(fam_t.lambda, 3) - fam_t.mu, ScalarExpr(3),
                          ScalarExpr(3)};
    const Point q = pt(0.8, 0.5, 0.5);
    const Eigen::VectorXd acc_t = covariant_derivative_along(Xt, Xt, fam_t.g, q);
    CHECK(MetricField::norm(fam_t.g.value_at(q), acc_t) < 1e-12);
}

TEST_CASE("geodesic: leaving the box raises LeftDomain") {
    const MetricField g = MetricField::euclidean(box_txy(0.0, 1.0));
    Eigen::VectorXd v0(3);
    v0 << 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(integrate_geodesic(g, pt(0.5, 0.5, 0.5), v0, 0.25, 10), LeftDomain);
}

TEST_CASE("pullback: identity map, polar form of the Prop-1.2 metric, rotation") {
    // identity
    Chart chart = make_chart_txy({0, 1}, {0.5, 1.5}, {0.5, 1.5});
    const MetricField g = family_metric(1.0, "1 + y/x^2", chart);
    CoordinateMap ident{chart,
                        {parse("t", kTxy), parse("x", kTxy), parse("y", kTxy)}};
    const Point p = pt(0.5, 1.0, 1.2);
    CHECK((pullback_metric(ident, g, p) - g.value_at(p)).cwiseAbs().maxCoeff() < 1e-14);

    // polar change: displayed form diag(r^2 cos^4/sin^2, 1, r^2) in (t,r,theta)
    Chart wide = make_chart_txy({0, 1}, {0.1, 1.6}, {0.1, 1.6});
    const MetricField gw = [&] {
        SymTensorField t = SymTensorField::zero(wide);
        t.set_entry(0, 0, parse("x^4/y^2", kTxy));
        t.set_entry(1, 1, ScalarExpr::constant(1, 3));
        t.set_entry(2, 2, ScalarExpr::constant(1, 3));
        return MetricField(std::move(t));
    }();
    Chart src;
    src.coords = {"t", "r", "theta"};
    src.domain = {{0, 1}, {0.5, 1.5}, {0.3, 1.2}};
    src.periodic = {false, false, false};
    CoordinateMap phi{src,
                      {parse("t", src.coords), parse("r*cos(theta)", src.coords),
                       parse("r*sin(theta)", src.coords)}};
    Point q(3);
    q << 0.0, std::sqrt(2.0), M_PI / 4;
    const Eigen::MatrixXd pulled = pullback_metric(phi, gw, q);
    CHECK(pulled(0, 0) == doctest::Approx(1.0));
    CHECK(pulled(1, 1) == doctest::Approx(1.0));
    CHECK(pulled(2, 2) == doctest::Approx(2.0));
    CHECK(std::abs(pulled(0, 1)) < 1e-12);
    CHECK(std::abs(pulled(1, 2)) < 1e-12);

    // rotations are isometries of the Euclidean metric
    const MetricField ge = MetricField::euclidean(box_txy(-4, 4));
    const double c = std::cos(0.7), s = std::sin(0.7);
    Chart src2 = box_txy(-1, 1);
    CoordinateMap rot{src2,
                      {parse("t", kTxy),
                       ScalarExpr::constant(c, 3) * parse("x", kTxy) -
                           ScalarExpr::constant(s, 3) * parse("y", kTxy),
                       ScalarExpr::constant(s, 3) * parse("x", kTxy) +
                           ScalarExpr::constant(c, 3) * parse("y", kTxy)}};
    const Eigen::MatrixXd rp = pullback_metric(rot, ge, pt(0.2, 0.3, -0.4));
    CHECK((rp - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pullback: singular Jacobian is reported") {
    const MetricField ge = MetricField::euclidean(box_txy(-4, 4));
    Chart src = box_txy(-1, 1);
    CoordinateMap collapse{src, {parse("t", kTxy), parse("x", kTxy), parse("x", kTxy)}};
    CHECK_THROWS_AS(pullback_metric(collapse, ge, pt(0, 0.5, 0.5)), SingularJacobian);
}

TEST_CASE("property: pullback along phi then its inverse returns g") {
    // phi: (t,x,y) -> (t, exp(x), y + x) has the expressible inverse
    // (t, ln(x), y - ln(x))
    Chart mid = make_chart_txy({0, 1}, {0.5, 3.5}, {-1.5, 2.5});
    const MetricField g = [&] {
        SymTensorField t = SymTensorField::zero(mid);
        t.set_entry(0, 0, parse("1 + x^2", mid.coords));
        t.set_entry(1, 1, ScalarExpr::constant(2.0, 3));
        t.set_entry(2, 2, parse("2 + sin(y)", mid.coords));
        t.set_entry(1, 2, ScalarExpr::constant(0.25, 3));
        return MetricField(std::move(t));
    }();

    Chart src = make_chart_txy({0, 1}, {0.0, 1.0}, {0.0, 1.0});
    CoordinateMap phi{src,
                      {parse("t", kTxy), parse("exp(x)", kTxy), parse("y + x", kTxy)}};

    // (phi^-1 o phi) = id, so pulling the phi-pullback back through phi^-1
    // must reproduce g at phi(p); instead verify directly: pull g through phi
    // and compare with the Jacobian-transported value computed from the
    // inverse map at the image point.
    Chart img = mid;
    CoordinateMap phi_inv{img,
                          {parse("t", kTxy), parse("ln(x)", kTxy), parse("y - ln(x)", kTxy)}};

    std::mt19937 rng(88);
    std::uniform_real_distribution<double> ud(0.05, 0.95);
    for (int trial = 0; trial < 20; ++trial) {
        const Point p = pt(ud(rng), ud(rng), ud(rng));
        const Eigen::MatrixXd pulled = pullback_metric(phi, g, p);

        Point image(3);
        for (int i = 0; i < 3; ++i) image[i] = phi.components[i].value_at(p);
        Eigen::MatrixXd jac_inv(3, 3);
        for (int i = 0; i < 3; ++i) jac_inv.row(i) = phi_inv.components[i].jet_at(image).grad;
        // pulling `pulled` back along phi^-1 lands on g(image)
        const Eigen::MatrixXd back = jac_inv.transpose() * pulled * jac_inv;
        CHECK((back - g.value_at(image)).cwiseAbs().maxCoeff() < 1e-10);
    }
}
