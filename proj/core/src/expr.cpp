#include "codazzi/expr.hpp"

#include <cmath>
#include <sstream>

namespace codazzi {

Eigen::MatrixXd Jet2::hess_matrix() const {
    const int n = nvars();
    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) h(i, j) = h(j, i) = hess(i, j);
    return h;
}

namespace detail {

enum class Kind { Constant, Variable, Unary, Binary, PowConst };

struct ExprNode {
    Kind kind;
    double constant = 0.0;   // Constant value, or PowConst exponent
    int var_index = -1;
    std::string var_name;
    UnaryOp uop = UnaryOp::Neg;
    BinaryOp bop = BinaryOp::Add;
    NodePtr lhs, rhs;        // Unary/PowConst use lhs only
};

namespace {

NodePtr make_const(double c) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Constant;
    n->constant = c;
    return n;
}

NodePtr make_var(int index, std::string name) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Variable;
    n->var_index = index;
    n->var_name = std::move(name);
    return n;
}

NodePtr make_unary(UnaryOp op, NodePtr child) {
    // Fold negation of a literal so "-0.5" round-trips as a constant node.
    if (op == UnaryOp::Neg && child->kind == Kind::Constant) return make_const(-child->constant);
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Unary;
    n->uop = op;
    n->lhs = std::move(child);
    return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Binary;
    n->bop = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr make_powc(NodePtr base, double exponent) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::PowConst;
    n->constant = exponent;
    n->lhs = std::move(base);
    return n;
}

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string describe_point(std::span<const double> p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += format_number(p[i]);
    }
    return s + ")";
}

// ---- printing -------------------------------------------------------------

// Precedence levels used both for printing and by the parser:
// add/sub = 1, mul/div = 2, unary minus = 3, pow = 4, atoms = 5.
int precedence(const ExprNode& n) {
    switch (n.kind) {
        case Kind::Constant: return n.constant < 0 ? 3 : 5;
        case Kind::Variable: return 5;
        case Kind::Unary: return n.uop == UnaryOp::Neg ? 3 : 5;
        case Kind::PowConst: return 4;
        case Kind::Binary:
            return (n.bop == BinaryOp::Add || n.bop == BinaryOp::Sub) ? 1 : 2;
    }
    return 5;
}

void print_node(const ExprNode& n, std::ostream& os);

void print_child(const NodePtr& child, int min_prec, std::ostream& os) {
    if (precedence(*child) < min_prec) {
        os << '(';
        print_node(*child, os);
        os << ')';
    } else {
        print_node(*child, os);
    }
}

void print_node(const ExprNode& n, std::ostream& os) {
    switch (n.kind) {
        case Kind::Constant:
            os << format_number(n.constant);
            break;
        case Kind::Variable:
            os << n.var_name;
            break;
        case Kind::Unary:
            switch (n.uop) {
                case UnaryOp::Neg:
                    os << '-';
                    print_child(n.lhs, 4, os);
                    break;
                case UnaryOp::Sin: os << "sin("; print_node(*n.lhs, os); os << ')'; break;
                case UnaryOp::Cos: os << "cos("; print_node(*n.lhs, os); os << ')'; break;
                case UnaryOp::Exp: os << "exp("; print_node(*n.lhs, os); os << ')'; break;
                case UnaryOp::Ln: os << "ln("; print_node(*n.lhs, os); os << ')'; break;
                case UnaryOp::Sqrt: os << "sqrt("; print_node(*n.lhs, os); os << ')'; break;
            }
            break;
        case Kind::PowConst:
            print_child(n.lhs, 5, os);
            os << '^';
            if (n.constant < 0) {
                os << '(' << format_number(n.constant) << ')';
            } else {
                os << format_number(n.constant);
            }
            break;
        case Kind::Binary: {
            const int prec = precedence(n);
            print_child(n.lhs, prec, os);
            switch (n.bop) {
                case BinaryOp::Add: os << " + "; break;
                case BinaryOp::Sub: os << " - "; break;
                case BinaryOp::Mul: os << '*'; break;
                case BinaryOp::Div: os << '/'; break;
            }
            // Right operand of - and / must re-parenthesize equal precedence.
            print_child(n.rhs, (n.bop == BinaryOp::Sub || n.bop == BinaryOp::Div) ? prec + 1 : prec,
                        os);
            break;
        }
    }
}

// ---- jet algebra ----------------------------------------------------------

Jet2 jet_add(const Jet2& a, const Jet2& b) {
    Jet2 r = a;
    r.value += b.value;
    r.grad += b.grad;
    r.hess_upper += b.hess_upper;
    return r;
}

Jet2 jet_sub(const Jet2& a, const Jet2& b) {
    Jet2 r = a;
    r.value -= b.value;
    r.grad -= b.grad;
    r.hess_upper -= b.hess_upper;
    return r;
}

Jet2 jet_mul(const Jet2& a, const Jet2& b) {
    const int n = a.nvars();
    Jet2 r(n);
    r.value = a.value * b.value;
    r.grad = a.value * b.grad + b.value * a.grad;
    r.hess_upper = a.value * b.hess_upper + b.value * a.hess_upper;
    for (int i = 0, k = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++k)
            r.hess_upper[k] += a.grad[i] * b.grad[j] + b.grad[i] * a.grad[j];
    return r;
}

// Chain rule for a scalar function u applied to jet f: needs u(f), u'(f), u''(f).
Jet2 jet_chain(const Jet2& f, double u, double du, double d2u) {
    const int n = f.nvars();
    Jet2 r(n);
    r.value = u;
    r.grad = du * f.grad;
    r.hess_upper = du * f.hess_upper;
    for (int i = 0, k = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++k) r.hess_upper[k] += d2u * f.grad[i] * f.grad[j];
    return r;
}

bool is_integer(double x) { return std::nearbyint(x) == x && std::abs(x) < 1e15; }

} // namespace

// ---- evaluation -----------------------------------------------------------

namespace {

[[noreturn]] void domain_error(const ExprNode& n, std::span<const double> p) {
    std::ostringstream os;
    print_node(n, os);
    throw DomainError(os.str(), describe_point(p));
}

double eval_value(const ExprNode& n, std::span<const double> p) {
    switch (n.kind) {
        case Kind::Constant: return n.constant;
        case Kind::Variable: return p[static_cast<std::size_t>(n.var_index)];
        case Kind::Unary: {
            const double a = eval_value(*n.lhs, p);
            switch (n.uop) {
                case UnaryOp::Neg: return -a;
                case UnaryOp::Sin: return std::sin(a);
                case UnaryOp::Cos: return std::cos(a);
                case UnaryOp::Exp: return std::exp(a);
                case UnaryOp::Ln:
                    if (a <= 0.0) domain_error(n, p);
                    return std::log(a);
                case UnaryOp::Sqrt:
                    if (a <= 0.0) domain_error(n, p);
                    return std::sqrt(a);
            }
            break;
        }
        case Kind::Binary: {
            const double a = eval_value(*n.lhs, p);
            const double b = eval_value(*n.rhs, p);
            switch (n.bop) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (b == 0.0) domain_error(n, p);
                    return a / b;
            }
            break;
        }
        case Kind::PowConst: {
            const double a = eval_value(*n.lhs, p);
            const double k = n.constant;
            if (!is_integer(k) && a <= 0.0) domain_error(n, p);
            if (is_integer(k) && k < 0 && a == 0.0) domain_error(n, p);
            return std::pow(a, k);
        }
    }
    return 0.0;
}

Jet2 eval_jet(const ExprNode& n, std::span<const double> p, int nvars) {
    switch (n.kind) {
        case Kind::Constant: {
            Jet2 r(nvars);
            r.value = n.constant;
            return r;
        }
        case Kind::Variable: {
            Jet2 r(nvars);
            r.value = p[static_cast<std::size_t>(n.var_index)];
            r.grad[n.var_index] = 1.0;
            return r;
        }
        case Kind::Unary: {
            const Jet2 a = eval_jet(*n.lhs, p, nvars);
            switch (n.uop) {
                case UnaryOp::Neg: return jet_chain(a, -a.value, -1.0, 0.0);
                case UnaryOp::Sin: {
                    const double s = std::sin(a.value), c = std::cos(a.value);
                    return jet_chain(a, s, c, -s);
                }
                case UnaryOp::Cos: {
                    const double s = std::sin(a.value), c = std::cos(a.value);
                    return jet_chain(a, c, -s, -c);
                }
                case UnaryOp::Exp: {
                    const double e = std::exp(a.value);
                    return jet_chain(a, e, e, e);
                }
                case UnaryOp::Ln: {
                    if (a.value <= 0.0) domain_error(n, p);
                    const double inv = 1.0 / a.value;
                    return jet_chain(a, std::log(a.value), inv, -inv * inv);
                }
                case UnaryOp::Sqrt: {
                    if (a.value <= 0.0) domain_error(n, p);
                    const double s = std::sqrt(a.value);
                    return jet_chain(a, s, 0.5 / s, -0.25 / (s * a.value));
                }
            }
            break;
        }
        case Kind::Binary: {
            const Jet2 a = eval_jet(*n.lhs, p, nvars);
            const Jet2 b = eval_jet(*n.rhs, p, nvars);
            switch (n.bop) {
                case BinaryOp::Add: return jet_add(a, b);
                case BinaryOp::Sub: return jet_sub(a, b);
                case BinaryOp::Mul: return jet_mul(a, b);
                case BinaryOp::Div: {
                    if (b.value == 0.0) domain_error(n, p);
                    const double inv = 1.0 / b.value;
                    return jet_mul(a, jet_chain(b, inv, -inv * inv, 2.0 * inv * inv * inv));
                }
            }
            break;
        }
        case Kind::PowConst: {
            const Jet2 a = eval_jet(*n.lhs, p, nvars);
            const double k = n.constant;
            if (k == 0.0) {
                Jet2 r(nvars);
                r.value = 1.0;
                return r;
            }
            if (k == 1.0) return a;
            if (!is_integer(k) && a.value <= 0.0) domain_error(n, p);
            if (is_integer(k) && k < 0 && a.value == 0.0) domain_error(n, p);
            const double v = std::pow(a.value, k);
            const double dv = k * std::pow(a.value, k - 1.0);
            const double d2v = k * (k - 1.0) * std::pow(a.value, k - 2.0);
            return jet_chain(a, v, dv, d2v);
        }
    }
    return Jet2(nvars);
}

bool node_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::Constant: return a.constant == b.constant;
        case Kind::Variable: return a.var_index == b.var_index && a.var_name == b.var_name;
        case Kind::Unary: return a.uop == b.uop && node_equal(*a.lhs, *b.lhs);
        case Kind::Binary:
            return a.bop == b.bop && node_equal(*a.lhs, *b.lhs) && node_equal(*a.rhs, *b.rhs);
        case Kind::PowConst: return a.constant == b.constant && node_equal(*a.lhs, *b.lhs);
    }
    return false;
}

NodePtr substitute_node(const NodePtr& n, int var_index, const NodePtr& replacement) {
    switch (n->kind) {
        case Kind::Constant: return n;
        case Kind::Variable: return n->var_index == var_index ? replacement : n;
        case Kind::Unary:
            return make_unary(n->uop, substitute_node(n->lhs, var_index, replacement));
        case Kind::Binary:
            return make_binary(n->bop, substitute_node(n->lhs, var_index, replacement),
                               substitute_node(n->rhs, var_index, replacement));
        case Kind::PowConst:
            return make_powc(substitute_node(n->lhs, var_index, replacement), n->constant);
    }
    return n;
}

bool node_is_constant(const ExprNode& n) {
    switch (n.kind) {
        case Kind::Constant: return true;
        case Kind::Variable: return false;
        case Kind::Unary: return node_is_constant(*n.lhs);
        case Kind::Binary: return node_is_constant(*n.lhs) && node_is_constant(*n.rhs);
        case Kind::PowConst: return node_is_constant(*n.lhs);
    }
    return false;
}

} // namespace
} // namespace detail

using detail::make_binary;
using detail::make_const;
using detail::make_powc;
using detail::make_unary;
using detail::make_var;

ScalarExpr::ScalarExpr(int nvars) : root_(make_const(0.0)), nvars_(nvars) {}
ScalarExpr::ScalarExpr(detail::NodePtr root, int nvars) : root_(std::move(root)), nvars_(nvars) {}

ScalarExpr ScalarExpr::constant(double c, int nvars) { return ScalarExpr(make_const(c), nvars); }

ScalarExpr ScalarExpr::variable(int index, const std::string& name, int nvars) {
    return ScalarExpr(make_var(index, name), nvars);
}

double ScalarExpr::value_at(std::span<const double> p) const {
    return detail::eval_value(*root_, p);
}

Jet2 ScalarExpr::jet_at(std::span<const double> p) const {
    return detail::eval_jet(*root_, p, nvars_);
}

std::string ScalarExpr::to_string() const {
    std::ostringstream os;
    detail::print_node(*root_, os);
    return os.str();
}

ScalarExpr ScalarExpr::substitute(int var_index, const ScalarExpr& replacement) const {
    return ScalarExpr(detail::substitute_node(root_, var_index, replacement.root_),
                      replacement.nvars_);
}

bool ScalarExpr::is_constant() const { return detail::node_is_constant(*root_); }

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b) {
    return detail::node_equal(*a.root_, *b.root_);
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    return ScalarExpr(make_binary(BinaryOp::Add, a.root_, b.root_), a.nvars_);
}
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
    return ScalarExpr(make_binary(BinaryOp::Sub, a.root_, b.root_), a.nvars_);
}
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    return ScalarExpr(make_binary(BinaryOp::Mul, a.root_, b.root_), a.nvars_);
}
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
    return ScalarExpr(make_binary(BinaryOp::Div, a.root_, b.root_), a.nvars_);
}
ScalarExpr operator-(const ScalarExpr& a) {
    return ScalarExpr(make_unary(UnaryOp::Neg, a.root_), a.nvars_);
}
ScalarExpr operator+(double c, const ScalarExpr& e) {
    return ScalarExpr::constant(c, e.nvars_) + e;
}
ScalarExpr operator-(double c, const ScalarExpr& e) {
    return ScalarExpr::constant(c, e.nvars_) - e;
}
ScalarExpr operator*(double c, const ScalarExpr& e) {
    return ScalarExpr::constant(c, e.nvars_) * e;
}
ScalarExpr sin(const ScalarExpr& e) {
    return ScalarExpr(make_unary(UnaryOp::Sin, e.root_), e.nvars_);
}
ScalarExpr cos(const ScalarExpr& e) {
    return ScalarExpr(make_unary(UnaryOp::Cos, e.root_), e.nvars_);
}
ScalarExpr exp(const ScalarExpr& e) {
    return ScalarExpr(make_unary(UnaryOp::Exp, e.root_), e.nvars_);
}
ScalarExpr ln(const ScalarExpr& e) {
    return ScalarExpr(make_unary(UnaryOp::Ln, e.root_), e.nvars_);
}
ScalarExpr sqrt(const ScalarExpr& e) {
    return ScalarExpr(make_unary(UnaryOp::Sqrt, e.root_), e.nvars_);
}
ScalarExpr powc(const ScalarExpr& base, double exponent) {
    return ScalarExpr(make_powc(base.root_, exponent), base.nvars_);
}

} // namespace codazzi
