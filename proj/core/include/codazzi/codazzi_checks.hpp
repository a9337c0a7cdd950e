#pragma once

#include <array>

#include "codazzi/eigenstructure.hpp"
#include "codazzi/report.hpp"

namespace codazzi {

/// Residual of the Codazzi identity: at each node the max over coordinate
/// triples (i,j,k) of |(∇_{∂i}A)(∂j,∂k) - (∇_{∂j}A)(∂i,∂k)|. Non-SPD and
/// non-evaluable nodes are excluded and counted.
ResidualReport codazzi_residual(const SymTensorField& A, const MetricField& g, const Grid& grid,
                                double tolerance = 1e-8);

/// The background identities checked as residuals, for a tensor with the
/// simple + (n-1)-fold eigenvalue split:
///   Same:       ‖A∇_Y X - λ∇_Y X - (D_Y λ)X + g(X,Y)∇λ‖_g over X,Y in V_λ
///   Constant:   ‖proj_{V_λ} ∇λ‖_g
///   Integrable: |g([X,Y], v_μ)| over X,Y spanning V_λ
///   Derivative: l2 over Y in V_λ of (D_Y μ - (λ-μ) g(∇_{v_μ} Y, v_μ))
enum class LemmaId { Same, Constant, Integrable, Derivative };

ResidualReport lemma_residual(LemmaId id, const SymTensorField& A, const MetricField& g,
                              const EigenStructure& eig, const Grid& grid,
                              const Tolerances& tol = {});

/// The four equivalent characterizations, each as a residual sweep plus a
/// boolean (max residual < tol.condition):
///   1. trace constant along V_λ      ‖proj_{V_λ} ∇(tr A)‖_g   (exact AD route)
///   2. mu constant along V_λ         ‖proj_{V_λ} ∇μ‖_g        (FD route)
///   3. V_μ integral curves geodesic  ‖∇_{v_μ} v_μ‖_g
///   4. ∇v_μ symmetric                max |T_ab - T_ba|, T_ab = g(∇_{∂a}v_μ, ∂b)
struct CharConditions {
    std::array<ResidualReport, 4> reports;
    std::array<bool, 4> holds{};
    bool agree = false;   // all four booleans identical
    bool all_true = false;
    bool vacuous = false; // no two-cluster node was available to test
};

CharConditions char_conditions(const SymTensorField& A, const MetricField& g,
                               const EigenStructure& eig, const Grid& grid,
                               const Tolerances& tol = {});

} // namespace codazzi
