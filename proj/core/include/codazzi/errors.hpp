#pragma once

#include <stdexcept>
#include <string>

namespace codazzi {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed expression text. `position` is a 1-based byte offset into the input.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& msg)
        : Error("syntax error at position " + std::to_string(position) + ": " + msg),
          position(position) {}
    std::size_t position;
};

/// An identifier that is not a coordinate of the enclosing chart.
class UnknownVariable : public Error {
public:
    UnknownVariable(std::size_t position, const std::string& name)
        : Error("unknown variable '" + name + "' at position " + std::to_string(position)),
          position(position), name(name) {}
    std::size_t position;
    std::string name;
};

/// Evaluation left the natural domain of a subexpression (division by zero,
/// non-positive ln/sqrt argument, ...).
class DomainError : public Error {
public:
    DomainError(const std::string& subexpr, const std::string& point_desc)
        : Error("domain error in '" + subexpr + "' at " + point_desc), subexpr(subexpr) {}
    std::string subexpr;
};

/// Metric failed its Cholesky factorization at a point.
class DegenerateMetric : public Error {
public:
    explicit DegenerateMetric(const std::string& point_desc)
        : Error("metric not positive definite at " + point_desc) {}
};

/// |lambda - mu| fell below the collision tolerance.
class EigenvalueCollision : public Error {
public:
    explicit EigenvalueCollision(const std::string& what) : Error(what) {}
};

class SingularJacobian : public Error {
public:
    explicit SingularJacobian(const std::string& point_desc)
        : Error("singular Jacobian at " + point_desc) {}
};

/// A geodesic (or other trajectory) exited the chart domain.
class LeftDomain : public Error {
public:
    LeftDomain(int step_index, const std::string& point_desc)
        : Error("trajectory left the chart domain at step " + std::to_string(step_index) +
                " (" + point_desc + ")"),
          step_index(step_index) {}
    int step_index;
};

class GridTooCoarse : public Error {
public:
    explicit GridTooCoarse(const std::string& what) : Error(what) {}
};

/// Invalid parameters for a Prop-4.5 mu form.
class BadParams : public Error {
public:
    explicit BadParams(const std::string& what) : Error(what) {}
};

class ConvergenceFailure : public Error {
public:
    explicit ConvergenceFailure(const std::string& what) : Error(what) {}
};

/// Bad run configuration; carries a field/line diagnostic.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace codazzi
