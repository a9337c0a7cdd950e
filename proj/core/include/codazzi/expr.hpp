#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "codazzi/errors.hpp"

namespace codazzi {

/// Second-order jet of a scalar field: value, gradient, and symmetric Hessian,
/// all with respect to the chart coordinates. The Hessian is stored packed
/// upper-triangular (row-major over i <= j), so symmetry holds by construction.
class Jet2 {
public:
    Jet2() = default;
    explicit Jet2(int nvars)
        : value(0.0),
          grad(Eigen::VectorXd::Zero(nvars)),
          hess_upper(Eigen::VectorXd::Zero(nvars * (nvars + 1) / 2)) {}

    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::VectorXd hess_upper;

    int nvars() const { return static_cast<int>(grad.size()); }

    static int packed_index(int i, int j, int n) {
        if (i > j) std::swap(i, j);
        // row i of the upper triangle starts after i full rows minus the skipped lower part
        return i * n - i * (i - 1) / 2 + (j - i);
    }

    double hess(int i, int j) const { return hess_upper[packed_index(i, j, nvars())]; }
    double& hess(int i, int j) { return hess_upper[packed_index(i, j, nvars())]; }

    /// Dense symmetric Hessian view.
    Eigen::MatrixXd hess_matrix() const;
};

enum class UnaryOp { Neg, Sin, Cos, Exp, Ln, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div };

namespace detail {
struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;
} // namespace detail

/// Immutable scalar-field expression over a fixed, ordered list of chart
/// coordinates. Values are shared; copies are cheap. Evaluation is pure, so
/// concurrent evaluation from many workers needs no synchronization.
///
/// Powers are restricted to constant exponents; general powers must be
/// spelled exp(b*ln(a)).
class ScalarExpr {
public:
    /// The constant-zero expression over `nvars` coordinates.
    explicit ScalarExpr(int nvars = 0);

    static ScalarExpr constant(double c, int nvars);
    static ScalarExpr variable(int index, const std::string& name, int nvars);

    int nvars() const { return nvars_; }

    /// Value only (cheaper than a full jet).
    double value_at(std::span<const double> p) const;
    double value_at(const Eigen::VectorXd& p) const {
        return value_at(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
    }

    /// Value, gradient, and Hessian in one pass of truncated second-order
    /// forward mode. Exact to machine rounding; no finite differences.
    Jet2 jet_at(std::span<const double> p) const;
    Jet2 jet_at(const Eigen::VectorXd& p) const {
        return jet_at(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
    }

    /// Pretty-print with minimal parentheses. Reparsing the result yields a
    /// structurally identical tree.
    std::string to_string() const;

    /// Replace every occurrence of variable `var_index` by `replacement`.
    /// The result lives over the replacement's coordinates.
    ScalarExpr substitute(int var_index, const ScalarExpr& replacement) const;

    bool is_constant() const;

    /// Structural equality (same tree shape, ops, names, and constants).
    friend bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b);

    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator-(const ScalarExpr& a);
    friend ScalarExpr operator+(double c, const ScalarExpr& e);
    friend ScalarExpr operator-(double c, const ScalarExpr& e);
    friend ScalarExpr operator*(double c, const ScalarExpr& e);
    friend ScalarExpr sin(const ScalarExpr& e);
    friend ScalarExpr cos(const ScalarExpr& e);
    friend ScalarExpr exp(const ScalarExpr& e);
    friend ScalarExpr ln(const ScalarExpr& e);
    friend ScalarExpr sqrt(const ScalarExpr& e);
    friend ScalarExpr powc(const ScalarExpr& base, double exponent);

    // internal
    explicit ScalarExpr(detail::NodePtr root, int nvars);
    const detail::NodePtr& root() const { return root_; }

private:
    detail::NodePtr root_;
    int nvars_;
};

/// Parse conventional infix notation over the given coordinate names.
///
/// Grammar (whitespace insignificant):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | power
///   power  := primary ['^' exponent]          exponent is a numeric constant,
///                                             optionally signed/parenthesized
///   primary:= number | coord | fn '(' expr ')' | '(' expr ')'
///   fn     := sin | cos | exp | ln | sqrt
///
/// Unary minus binds tighter than '*' and '/' but looser than '^',
/// so "-x^2" is -(x^2). A leading '-' on a literal folds into the constant.
ScalarExpr parse(const std::string& text, const std::vector<std::string>& chart_vars);

} // namespace codazzi
