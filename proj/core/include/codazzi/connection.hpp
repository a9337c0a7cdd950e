#pragma once

#include <vector>

#include <Eigen/Core>

#include "codazzi/fields.hpp"

namespace codazzi {

/// Christoffel symbols of the second kind at a point: gamma(k)(i,j) = Γ^k_{ij}.
struct Christoffels {
    std::vector<Eigen::MatrixXd> by_upper; // indexed by k

    int dim() const { return static_cast<int>(by_upper.size()); }
    double operator()(int k, int i, int j) const { return by_upper[k](i, j); }
};

/// Levi-Civita Γ^k_{ij} = (1/2) g^{kl} (∂_i g_{jl} + ∂_j g_{il} - ∂_l g_{ij}).
Christoffels christoffel_at(const MetricField& g, const Point& p);

/// Closed-form Christoffels of the metric (λ-μ)^(-2) dt² + λ dx² + λ dy² with
/// constant λ: Γ^t_tt = (λ-μ)^(-1) ∂_t μ, Γ^i_tt = -(1/λ)(λ-μ)^(-3) ∂_i μ,
/// Γ^t_it = (λ-μ)^(-1) ∂_i μ, all other symbols zero. Coordinate 0 is t.
/// Throws EigenvalueCollision when |λ - μ(p)| < collision_tol.
Christoffels christoffel_family_closed_form(double lambda, const ScalarExpr& mu, const Point& p,
                                            double collision_tol = 1e-8);

/// (∇_X T)_{jk} = ∂_X T_{jk} - Γ^m_{Xj} T_{mk} - Γ^m_{Xk} T_{jm} for a
/// symmetric (0,2) field T, X a coordinate direction index.
Eigen::MatrixXd covariant_derivative_tensor(const SymTensorField& T, const MetricField& g,
                                            int direction, const Point& p);

/// Vector field with ScalarExpr components V^k.
using VectorFieldExpr = std::vector<ScalarExpr>;

/// (∇_X V)^k = ∂_X V^k + Γ^k_{Xm} V^m, X a coordinate direction index.
Eigen::VectorXd covariant_derivative_vector(const VectorFieldExpr& V, const MetricField& g,
                                            int direction, const Point& p);

/// ∇_V W at p for expression vector fields (V contracted against the
/// coordinate-direction covariant derivatives of W).
Eigen::VectorXd covariant_derivative_along(const VectorFieldExpr& V, const VectorFieldExpr& W,
                                           const MetricField& g, const Point& p);

/// Hess f(∂_i, ∂_j) = ∂_i ∂_j f - Γ^k_{ij} ∂_k f, with exact AD derivatives.
Eigen::MatrixXd hessian_scalar(const ScalarExpr& f, const MetricField& g, const Point& p);

/// The six displayed Hessian components for the family metric with constant λ
/// (same layout as hessian_scalar). Fast path: no general Christoffel solve.
Eigen::MatrixXd hessian_family_closed_form(double lambda, const ScalarExpr& mu,
                                           const ScalarExpr& f, const Point& p,
                                           double collision_tol = 1e-8);

/// [V,W]^k = V^m ∂_m W^k - W^m ∂_m V^k.
Eigen::VectorXd lie_bracket(const VectorFieldExpr& V, const VectorFieldExpr& W, const Point& p);

} // namespace codazzi
