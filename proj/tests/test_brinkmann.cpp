#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <codazzi/kernel.hpp>
#include <codazzi/named_examples.hpp>
#include <codazzi/warp_classify.hpp>

using namespace codazzi;

namespace {

const std::vector<std::string> kTxy = {"t", "x", "y"};

Point pt(double t, double x, double y) {
    Point p(3);
    p << t, x, y;
    return p;
}

double default_grad_tol(const Grid& grid) { return 1e-3 * grid.box_diameter(); }

} // namespace

TEST_CASE("assemble: constants are an exact kernel vector on the Euclidean grid") {
    const NamedExample flat = named_example("flat");
    const Grid grid(flat.g.chart(), GridSpec::uniform(7, 3));
    const HessSystem sys = assemble_hess_system(flat.g, grid);
    CHECK(static_cast<int>(sys.matrix.rows()) == 125 * 6);
    const Eigen::VectorXd v =
        sys.sample(ScalarExpr::constant(1.0, 3), ScalarExpr::constant(0.0, 3));
    CHECK(sys.residual(v) < 1e-12);
}

TEST_CASE("assemble: the quadratic with a = 1 is stencil-exact on the Euclidean grid") {
    const NamedExample flat = named_example("flat");
    const Grid grid(flat.g.chart(), GridSpec::uniform(7, 3));
    const HessSystem sys = assemble_hess_system(flat.g, grid);
    const Eigen::VectorXd v =
        sys.sample(parse("(t^2 + x^2 + y^2)/2", kTxy), ScalarExpr::constant(1.0, 3));
    CHECK(sys.residual(v) < 1e-10);
}

TEST_CASE("assemble: the Prop-1.2 continuum solution has tiny stencil residual") {
    const NamedExample iw = named_example("inconsistent_warp");
    const Grid grid(iw.g.chart(), iw.default_grid);
    const HessSystem sys = assemble_hess_system(iw.g, grid);
    const Eigen::VectorXd v = sys.sample(parse("(x^2+y^2)/2", kTxy), ScalarExpr::constant(1.0, 3));
    CHECK(sys.residual(v) < 1e-8);
}

TEST_CASE("assemble: too-coarse grids are rejected") {
    const NamedExample flat = named_example("flat");
    CHECK_THROWS_AS(assemble_hess_system(flat.g, Grid(flat.g.chart(), GridSpec::uniform(4, 3))),
                    GridTooCoarse);
}

TEST_CASE("kernel: Euclidean 7^3 has dimension 5 = {1, t, x, y, |p|^2/2}") {
    const NamedExample flat = named_example("flat");
    const Grid grid(flat.g.chart(), GridSpec::uniform(7, 3));
    const HessSystem sys = assemble_hess_system(flat.g, grid);
    const KernelBasis kb = kernel_basis(sys, 1e-6);
    CHECK(kb.kernel_dim == 5);
    CHECK(kb.contains_constant);

    // oracle: each analytic solution, sampled, is (a) low-residual and
    // (b) inside the kernel span
    const std::vector<std::pair<std::string, std::string>> solutions = {
        {"1", "0"}, {"t", "0"}, {"x", "0"}, {"y", "0"}, {"(t^2 + x^2 + y^2)/2", "1"}};
    for (const auto& [f_text, a_text] : solutions) {
        Eigen::VectorXd v = sys.sample(parse(f_text, kTxy), parse(a_text, kTxy));
        CHECK(sys.residual(v) < 1e-9 * std::max(1.0, v.norm()));
        for (int c = 0; c < 2 * sys.n_nodes; ++c)
            if (!sys.coupled[c]) v[c] = 0.0;
        v.normalize();
        const Eigen::VectorXd proj = kb.vectors * (kb.vectors.transpose() * v);
        CAPTURE(f_text);
        CHECK((v - proj).norm() < 1e-6);
    }

    // certificate soundness: every kernel vector satisfies the system
    for (int c = 0; c < kb.kernel_dim; ++c)
        CHECK(sys.residual(kb.vectors.col(c)) < 10.0 * 1e-6 * kb.sigma_max);
}

TEST_CASE("kernel: torus grids keep only the constants") {
    const NamedExample torus = named_example("torus");
    const Grid grid(torus.g.chart(), GridSpec::uniform(7, 3));
    const HessSystem sys = assemble_hess_system(torus.g, grid);
    CHECK(sys.coupled_count == 2 * sys.n_nodes); // fully periodic: everything coupled
    const KernelBasis kb = kernel_basis(sys, 1e-6);
    CHECK(kb.kernel_dim == 1);
    CHECK(kb.contains_constant);
}

TEST_CASE("kernel: Prop-1.2 grid keeps the constants and the radial quadratic") {
    const NamedExample iw = named_example("inconsistent_warp");
    const Grid grid(iw.g.chart(), iw.default_grid);
    const HessSystem sys = assemble_hess_system(iw.g, grid);
    const KernelBasis kb = kernel_basis(sys, 1e-6);
    CHECK(kb.kernel_dim == 2);

    const WarpVerdict v =
        classify_warped(kb, sys, iw.g, iw.probe, default_grad_tol(grid));
    REQUIRE(v.kind == WarpVerdict::Kind::WarpedCandidate);
    CHECK(v.certificate_grad_norm > 0.1);
}

TEST_CASE("property: kernel dimension is stable under grid refinement") {
    for (const std::string& id : {"flat", "torus", "inconsistent_warp"}) {
        const NamedExample ex = named_example(id);
        int dims[2];
        int k = 0;
        for (int n : {7, 9}) {
            const Grid grid(ex.g.chart(), GridSpec::uniform(n, 3));
            const HessSystem sys = assemble_hess_system(ex.g, grid);
            dims[k++] = kernel_basis(sys, 1e-6).kernel_dim;
        }
        CAPTURE(id);
        CHECK(dims[0] == dims[1]);
    }
}

TEST_CASE("property: quadratic solutions of constant-coefficient metrics are stencil-exact") {
    std::mt19937 rng(606);
    std::uniform_real_distribution<double> dd(0.5, 3.0);
    for (int trial = 0; trial < 5; ++trial) {
        Chart chart = make_chart_txy({0, 1.0}, {0, 1.2}, {0, 1.4});
        SymTensorField gt = SymTensorField::zero(chart);
        const double d0 = dd(rng), d1 = dd(rng), d2 = dd(rng);
        gt.set_entry(0, 0, ScalarExpr::constant(d0, 3));
        gt.set_entry(1, 1, ScalarExpr::constant(d1, 3));
        gt.set_entry(2, 2, ScalarExpr::constant(d2, 3));
        const MetricField g(std::move(gt));

        // continuum solution of Hess f = a g: f = (d0 t^2 + d1 x^2 + d2 y^2)/2, a = 1
        const Grid grid(chart, GridSpec::uniform(7, 3));
        const HessSystem sys = assemble_hess_system(g, grid);
        std::ostringstream f;
        f.precision(17);
        f << "(" << d0 << "*t^2 + " << d1 << "*x^2 + " << d2 << "*y^2)/2";
        const Eigen::VectorXd v = sys.sample(parse(f.str(), kTxy), ScalarExpr::constant(1.0, 3));
        CHECK(sys.residual(v) < 1e-10);
    }
}

TEST_CASE("classify: Euclidean space is trivially warped (f = x, a = 0)") {
    const NamedExample flat = named_example("flat");
    const Grid grid(flat.g.chart(), GridSpec::uniform(7, 3));
    const HessSystem sys = assemble_hess_system(flat.g, grid);
    const KernelBasis kb = kernel_basis(sys, 1e-6);
    const WarpVerdict v = classify_warped(kb, sys, flat.g, flat.probe, default_grad_tol(grid));
    CHECK(v.kind == WarpVerdict::Kind::WarpedCandidate);
    CHECK(v.certificate_residual < 10.0 * 1e-6 * kb.sigma_max);
}

TEST_CASE("classify: the torus probe sees no nontrivial solution") {
    const NamedExample torus = named_example("torus");
    const Grid grid(torus.g.chart(), GridSpec::uniform(7, 3));
    const HessSystem sys = assemble_hess_system(torus.g, grid);
    const KernelBasis kb = kernel_basis(sys, 1e-6);
    const WarpVerdict v = classify_warped(kb, sys, torus.g, pt(0, 0, 0), default_grad_tol(grid));
    CHECK(v.kind == WarpVerdict::Kind::NoNontrivialSolution);
}

TEST_CASE("verify_candidate: exact solutions pass, non-solutions fail loudly") {
    const NamedExample iw = named_example("inconsistent_warp");
    const Grid grid(iw.g.chart(), iw.default_grid);
    const ResidualReport ok = verify_candidate(parse("(x^2+y^2)/2", kTxy),
                                               ScalarExpr::constant(1.0, 3), iw.g, grid, 1e-10);
    CHECK(ok.pass);
    CHECK(ok.max_residual < 1e-10);

    const NamedExample flat = named_example("flat");
    const Grid fgrid(flat.g.chart(), GridSpec::uniform(7, 3));
    const ResidualReport linear =
        verify_candidate(parse("x", kTxy), ScalarExpr::constant(0.0, 3), flat.g, fgrid, 1e-12);
    CHECK(linear.pass);
    CHECK(linear.max_residual == 0.0);

    const ResidualReport wrong =
        verify_candidate(parse("x^2", kTxy), ScalarExpr::constant(1.0, 3), flat.g, fgrid, 1e-10);
    CHECK_FALSE(wrong.pass);
    CHECK(wrong.max_residual == doctest::Approx(1.0));
}

TEST_CASE("consistency: verified candidates are accepted by the classifier's gate") {
    // AD-path acceptance (verify_candidate) and stencil-path acceptance agree
    const NamedExample iw = named_example("inconsistent_warp");
    const Grid grid(iw.g.chart(), iw.default_grid);
    const ResidualReport ad = verify_candidate(parse("(x^2+y^2)/2", kTxy),
                                               ScalarExpr::constant(1.0, 3), iw.g, grid, 1e-10);
    REQUIRE(ad.pass);

    const HessSystem sys = assemble_hess_system(iw.g, grid);
    Eigen::VectorXd v = sys.sample(parse("(x^2+y^2)/2", kTxy), ScalarExpr::constant(1.0, 3));
    const double grad = grad_norm_at(sys, iw.g, v.head(sys.n_nodes), iw.probe);
    CHECK(grad > default_grad_tol(grid));
    const KernelBasis kb = kernel_basis(sys, 1e-6);
    const WarpVerdict verdict = classify_warped(kb, sys, iw.g, iw.probe, default_grad_tol(grid));
    CHECK(verdict.kind == WarpVerdict::Kind::WarpedCandidate);
}
