#include "codazzi/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>

namespace codazzi {
namespace {

struct Parser {
    const std::string& text;
    const std::vector<std::string>& vars;
    std::size_t pos = 0;

    Parser(const std::string& t, const std::vector<std::string>& v) : text(t), vars(v) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(pos + 1, msg); }

    ScalarExpr parse_expression() {
        ScalarExpr lhs = parse_term();
        for (;;) {
            if (consume('+')) {
                lhs = lhs + parse_term();
            } else if (consume('-')) {
                lhs = lhs - parse_term();
            } else {
                return lhs;
            }
        }
    }

    ScalarExpr parse_term() {
        ScalarExpr lhs = parse_factor();
        for (;;) {
            if (consume('*')) {
                lhs = lhs * parse_factor();
            } else if (consume('/')) {
                lhs = lhs / parse_factor();
            } else {
                return lhs;
            }
        }
    }

    ScalarExpr parse_factor() {
        if (consume('-')) return -parse_factor();
        return parse_power();
    }

    ScalarExpr parse_power() {
        ScalarExpr base = parse_primary();
        if (!consume('^')) return base;
        const double exponent = parse_constant_exponent();
        if (peek() == '^') fail("chained '^' is not supported; parenthesize the base");
        return powc(base, exponent);
    }

    // Exponents must be numeric constants, optionally signed and/or
    // parenthesized: x^2, x^-2, x^(-0.5).
    double parse_constant_exponent() {
        skip_ws();
        if (consume('(')) {
            const double v = parse_signed_number("constant exponent");
            if (!consume(')')) fail("expected ')' after exponent");
            return v;
        }
        return parse_signed_number("constant exponent");
    }

    double parse_signed_number(const char* what) {
        skip_ws();
        double sign = 1.0;
        if (consume('-')) sign = -1.0;
        skip_ws();
        auto num = try_number();
        if (!num) fail(std::string("expected ") + what);
        return sign * *num;
    }

    std::optional<double> try_number() {
        if (pos >= text.size()) return std::nullopt;
        const char c = text[pos];
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.') return std::nullopt;
        const char* start = text.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(start, &end);
        if (end == start) return std::nullopt;
        pos += static_cast<std::size_t>(end - start);
        return v;
    }

    ScalarExpr parse_primary() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");

        if (auto num = try_number()) {
            return ScalarExpr::constant(*num, static_cast<int>(vars.size()));
        }

        if (consume('(')) {
            ScalarExpr inner = parse_expression();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }

        const char c = text[pos];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            const std::string name = text.substr(start, pos - start);

            if (peek() == '(') {
                consume('(');
                ScalarExpr arg = parse_expression();
                if (!consume(')')) fail("expected ')' after function argument");
                if (name == "sin") return sin(arg);
                if (name == "cos") return cos(arg);
                if (name == "exp") return exp(arg);
                if (name == "ln") return ln(arg);
                if (name == "sqrt") return sqrt(arg);
                throw SyntaxError(start + 1, "unknown function '" + name + "'");
            }

            for (std::size_t i = 0; i < vars.size(); ++i) {
                if (vars[i] == name)
                    return ScalarExpr::variable(static_cast<int>(i), name,
                                                static_cast<int>(vars.size()));
            }
            throw UnknownVariable(start + 1, name);
        }

        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

ScalarExpr parse(const std::string& text, const std::vector<std::string>& chart_vars) {
    Parser p(text, chart_vars);
    if (p.at_end()) p.fail("empty expression");
    ScalarExpr e = p.parse_expression();
    if (!p.at_end()) p.fail("trailing input");
    return e;
}

} // namespace codazzi
