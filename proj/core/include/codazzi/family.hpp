#pragma once

#include "codazzi/fields.hpp"
#include "codazzi/report.hpp"

namespace codazzi {

/// One member of the family on the chart {t, x, y}:
///   g = (λ - μ)^(-2) dt² + λ dx² + λ dy²
///   A = μ (λ - μ)^(-2) dt² + λ² dx² + λ² dy²     (the (0,2) form of A∂t = μ∂t,
///                                                  A∂x = λ∂x, A∂y = λ∂y)
/// with constant λ > 0 and μ a scalar expression kept away from λ on the box.
struct FamilyInstance {
    double lambda = 1.0;
    ScalarExpr mu;
    Chart chart;
    MetricField g;
    SymTensorField A;
};

/// Build a family instance and verify λ - μ stays outside the collision
/// tolerance on a sweep of the box (throws EigenvalueCollision otherwise).
FamilyInstance build_family(double lambda, const ScalarExpr& mu, const Chart& chart,
                            double collision_tol = 1e-8, int collision_sweep_n = 11);

/// The six admissible mu(x, y) shapes. `params` usage per form:
///   1: c1, c2, c3, c4   ->  1 + c1 / (1 - c3 x - c4 y - c2 (x² + y²))
///   2: a, b, c  (a≠0, b≠0) -> (a x + G((c + a y) / (a (b + a x)))) / (a x + b)
///   3: a, c     (a≠0)      -> (a y + G(x / (c + a y))) / (c + a y)
///   4: b, c     (b≠0)      -> G((b y - c x) / b)
///   5: (none)              -> G(x)
///   6: (none)              -> G(y)
/// G is a one-variable expression; its variable is substituted by the inner
/// expression over the chart coordinates {t, x, y}.
struct MuFormParams {
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0; // form 1
    double a = 0, b = 0, c = 0;            // forms 2-4
};

ScalarExpr mu_form(int k, const MuFormParams& params, const ScalarExpr& G);

/// Max over the grid of |(a x + b) ∂_x μ + (a y + c) ∂_y μ - a (1 - μ)|.
ResidualReport characteristics_residual(const ScalarExpr& mu, double a, double b, double c,
                                        const Chart& chart, const Grid& grid,
                                        double tolerance = 1e-10);

} // namespace codazzi
