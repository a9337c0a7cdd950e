#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <codazzi/codazzi_checks.hpp>
#include <codazzi/named_examples.hpp>
#include <codazzi/warp_extract.hpp>

using namespace codazzi;

namespace {

const std::vector<std::string> kTxy = {"t", "x", "y"};

Point pt(double t, double x, double y) {
    Point p(3);
    p << t, x, y;
    return p;
}

struct Instance {
    std::string id;
    MetricField g;
    SymTensorField A;
    GridSpec grid;
};

std::vector<Instance> battery() {
    std::vector<Instance> out;
    for (const std::string& id : named_example_ids()) {
        NamedExample ex = named_example(id);
        GridSpec grid = ex.default_grid;
        if (id == "torus") grid = GridSpec::uniform(7, 3); // keep unit runtime low
        out.push_back(Instance{ex.id, std::move(ex.g), std::move(ex.A), grid});
    }
    return out;
}

} // namespace

TEST_CASE("codazzi residual: parallel tensors (A = g) vanish on every battery metric") {
    for (const auto& inst : battery()) {
        const Grid grid(inst.g.chart(), GridSpec::uniform(5, 3));
        const ResidualReport r = codazzi_residual(inst.g.tensor(), inst.g, grid, 1e-10);
        CAPTURE(inst.id);
        CHECK(r.pass);
        CHECK(r.excluded_count == 0);
    }
}

TEST_CASE("codazzi residual: the torus instance passes, a broken entry is caught") {
    NamedExample torus = named_example("torus");
    const Grid grid(torus.g.chart(), GridSpec::uniform(11, 3));
    const ResidualReport good = codazzi_residual(torus.A, torus.g, grid, 1e-8);
    CHECK(good.pass);
    CHECK(good.max_residual < 1e-8);

    SymTensorField broken = torus.A;
    broken.set_entry(1, 1, parse("1 + 0.1*x", kTxy));
    const ResidualReport bad = codazzi_residual(broken, torus.g, grid, 1e-8);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_residual > 1e-3);
}

TEST_CASE("eigen structure: family mu = x*y recovers {mu, lambda, lambda} and the ∂t axis") {
    NamedExample ex = named_example("mu_xy");
    const Grid grid(ex.g.chart(), ex.default_grid);
    const EigenStructure eig = eigen_structure(ex.A, ex.g, grid);
    CHECK(eig.two_cluster_everywhere);

    const int idx = grid.nearest_node(pt(0, 1, 2));
    const PointEigen& pe = eig.nodes[idx];
    REQUIRE(pe.included);
    CHECK(pe.mu() == doctest::Approx(2.0));
    CHECK(pe.lambda() == doctest::Approx(1.0));
    // simple eigenvector collinear with ∂t in the g sense
    const Eigen::MatrixXd gm = ex.g.value_at(grid.point(idx));
    const Eigen::VectorXd gv = gm * pe.frame.col(pe.simple_col());
    CHECK(std::abs(gv[1]) < 1e-9);
    CHECK(std::abs(gv[2]) < 1e-9);

    // A v = kappa g v residual per pair
    const Eigen::MatrixXd am = ex.A.value_at(grid.point(idx));
    for (int c = 0; c < 3; ++c) {
        const Eigen::VectorXd r = am * pe.frame.col(c) - pe.eigenvalues[c] * gm * pe.frame.col(c);
        CHECK(r.cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("eigen structure: A = 3g is a single cluster, flagged not-two-eigenvalue") {
    NamedExample flat = named_example("flat");
    SymTensorField A3 = flat.g.tensor();
    for (int i = 0; i < 3; ++i) A3.set_entry(i, i, ScalarExpr::constant(3.0, 3));
    const Grid grid(flat.g.chart(), GridSpec::uniform(5, 3));
    const EigenStructure eig = eigen_structure(A3, flat.g, grid);
    CHECK(eig.single_cluster_everywhere);
    CHECK(eig.included_count == 0);
}

TEST_CASE("eigen structure: collision points are excluded and counted") {
    // mu crosses lambda = 1 inside this box
    Chart chart = make_chart_txy({0.0, 1.0}, {0.5, 1.5}, {0.5, 1.5});
    SymTensorField gt = SymTensorField::zero(chart);
    for (int i = 0; i < 3; ++i) gt.set_entry(i, i, ScalarExpr::constant(1.0, 3));
    const MetricField g(std::move(gt));
    SymTensorField A = g.tensor();
    A.set_entry(0, 0, parse("x", kTxy)); // eigenvalues {x, 1, 1}: collision at x = 1
    const Grid grid(chart, GridSpec::uniform(5, 3));
    const EigenStructure eig = eigen_structure(A, g, grid);
    CHECK(eig.excluded_count > 0);
    CHECK(eig.included_count > 0);
    CHECK_FALSE(eig.two_cluster_everywhere);
}

TEST_CASE("property: eigen reconstruction sum kappa (gv)(gv)^T matches A") {
    for (const auto& inst : battery()) {
        const Grid grid(inst.g.chart(), GridSpec::uniform(5, 3));
        const EigenStructure eig = eigen_structure(inst.A, inst.g, grid);
        double worst = 0;
        for (int i = 0; i < grid.size(); ++i) {
            if (!eig.nodes[i].solved) continue;
            const PointEigen& pe = eig.nodes[i];
            const Eigen::MatrixXd gm = inst.g.value_at(grid.point(i));
            const Eigen::MatrixXd am = inst.A.value_at(grid.point(i));
            Eigen::MatrixXd rec = Eigen::MatrixXd::Zero(3, 3);
            for (int c = 0; c < 3; ++c) {
                const Eigen::VectorXd flat = gm * pe.frame.col(c);
                rec += pe.eigenvalues[c] * flat * flat.transpose();
            }
            worst = std::max(worst, (rec - am).cwiseAbs().maxCoeff());
        }
        CAPTURE(inst.id);
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("lemma residuals: torus instance satisfies all four below 1e-6") {
    NamedExample torus = named_example("torus");
    const GridSpec spec = GridSpec::uniform(7, 3);
    const Grid grid(torus.g.chart(), spec);
    const EigenStructure eig = eigen_structure(torus.A, torus.g, grid);
    REQUIRE(eig.two_cluster_everywhere);

    const Tolerances tol;
    for (LemmaId id :
         {LemmaId::Same, LemmaId::Constant, LemmaId::Integrable, LemmaId::Derivative}) {
        const ResidualReport r = lemma_residual(id, torus.A, torus.g, eig, grid, tol);
        CAPTURE(r.name);
        CHECK(r.pass);
    }

    // lambda is literally constant here: the Constant residual is essentially
    // machine-zero, far below the FD-limited tolerance
    const ResidualReport c = lemma_residual(LemmaId::Constant, torus.A, torus.g, eig, grid, tol);
    CHECK(c.max_residual < 1e-10);
}

TEST_CASE("lemma integrable: V_lambda is a coordinate distribution on the family") {
    NamedExample ex = named_example("mu_xy");
    const Grid grid(ex.g.chart(), GridSpec::uniform(5, 3));
    const EigenStructure eig = eigen_structure(ex.A, ex.g, grid);
    const ResidualReport r =
        lemma_residual(LemmaId::Integrable, ex.A, ex.g, eig, grid, Tolerances{});
    CHECK(r.pass);
    CHECK(r.max_residual < 1e-8);
}

TEST_CASE("property: every battery instance passing the Codazzi gate passes the lemma suite") {
    const Tolerances tol;
    for (const auto& inst : battery()) {
        const Grid grid(inst.g.chart(), GridSpec::uniform(5, 3));
        const ResidualReport codazzi = codazzi_residual(inst.A, inst.g, grid, tol.codazzi);
        if (!codazzi.pass) continue;
        const EigenStructure eig = eigen_structure(inst.A, inst.g, grid);
        for (LemmaId id :
             {LemmaId::Same, LemmaId::Constant, LemmaId::Integrable, LemmaId::Derivative}) {
            const ResidualReport r = lemma_residual(id, inst.A, inst.g, eig, grid, tol);
            CAPTURE(inst.id);
            CAPTURE(r.name);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("conditions: all-true instances vs all-false instances, booleans agree") {
    const Tolerances tol;
    for (const auto& inst : battery()) {
        const Grid grid(inst.g.chart(), inst.grid);
        const EigenStructure eig = eigen_structure(inst.A, inst.g, grid);
        const CharConditions c = char_conditions(inst.A, inst.g, eig, grid, tol);
        CAPTURE(inst.id);
        CHECK(c.agree);
        if (inst.id == "flat") {
            CHECK(c.vacuous); // single cluster: nothing to test, vacuously true
            CHECK(c.all_true);
        } else if (inst.id == "parallel_shift" || inst.id == "warped_consistent" ||
                   inst.id == "mu_of_t") {
            CHECK(c.all_true);
        } else {
            CHECK_FALSE(c.all_true);
        }
    }
}

TEST_CASE("property: condition booleans are invariant under A -> A + c g") {
    const Tolerances tol;
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> cd(0.5, 3.0);
    for (const std::string& id : {"mu_of_t", "mu_xy"}) {
        NamedExample ex = named_example(id);
        const Grid grid(ex.g.chart(), GridSpec::uniform(5, 3));
        const EigenStructure eig = eigen_structure(ex.A, ex.g, grid);
        const CharConditions base = char_conditions(ex.A, ex.g, eig, grid, tol);

        const double c = cd(rng);
        SymTensorField shifted = ex.A;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j)
                shifted.set_entry(i, j, ex.A.entry(i, j) +
                                            ScalarExpr::constant(c, 3) * ex.g.tensor().entry(i, j));
        const EigenStructure eig2 = eigen_structure(shifted, ex.g, grid);
        const CharConditions moved = char_conditions(shifted, ex.g, eig2, grid, tol);
        CAPTURE(id);
        for (int k = 0; k < 4; ++k) CHECK(base.holds[k] == moved.holds[k]);
    }
}

TEST_CASE("warp extraction: the consistent instance gives eta = 1, q = 2t, h = identity") {
    NamedExample ex = named_example("warped_consistent");
    const Grid grid(ex.g.chart(), ex.default_grid);
    const EigenStructure eig = eigen_structure(ex.A, ex.g, grid);
    const WarpExtract w = eta_and_warp_extract(ex.A, ex.g, eig, grid);
    REQUIRE(w.status == WarpExtract::Status::Ok);
    CHECK(w.conditions.all_true);
    for (double eta : w.eta_samples) CHECK(std::abs(eta - 1.0) < 1e-5);
    for (std::size_t k = 0; k < w.q_samples.size(); ++k)
        CHECK(std::abs(w.q_samples[k] - 2.0 * w.t_nodes[k]) < 1e-5);
    for (const auto& h : w.h_samples)
        CHECK((h - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-5);
    CHECK(w.max_h_t_residual < 1e-5);
    CHECK(w.eta_spatial.pass);

    // the instance itself is Codazzi (the lambda' = (mu-lambda) w'/w relation)
    const ResidualReport codazzi = codazzi_residual(ex.A, ex.g, grid, 1e-8);
    CHECK(codazzi.pass);
}

TEST_CASE("warp extraction: constant lambda gives trivial warping (eta = 0, q = 0)") {
    NamedExample ex = named_example("mu_of_t");
    const Grid grid(ex.g.chart(), ex.default_grid);
    const EigenStructure eig = eigen_structure(ex.A, ex.g, grid);
    const WarpExtract w = eta_and_warp_extract(ex.A, ex.g, eig, grid);
    REQUIRE(w.status == WarpExtract::Status::Ok);
    for (double eta : w.eta_samples) CHECK(std::abs(eta) < 1e-9);
    for (double q : w.q_samples) CHECK(std::abs(q) < 1e-9);
}

TEST_CASE("warp extraction: the torus returns NotWarpedEvidence") {
    NamedExample ex = named_example("torus");
    const Grid grid(ex.g.chart(), GridSpec::uniform(7, 3));
    const EigenStructure eig = eigen_structure(ex.A, ex.g, grid);
    const WarpExtract w = eta_and_warp_extract(ex.A, ex.g, eig, grid);
    CHECK(w.status == WarpExtract::Status::NotWarpedEvidence);
    CHECK_FALSE(w.conditions.all_true);
}
