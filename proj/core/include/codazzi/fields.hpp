#pragma once

#include <vector>

#include <Eigen/Core>

#include "codazzi/chart.hpp"
#include "codazzi/expr.hpp"

namespace codazzi {

/// Symmetric (0,2) tensor field with ScalarExpr entries, stored packed
/// upper-triangular so A_ij = A_ji holds by construction.
class SymTensorField {
public:
    SymTensorField() = default;
    SymTensorField(Chart chart, std::vector<ScalarExpr> upper_entries);

    /// All-zero field on the chart.
    static SymTensorField zero(const Chart& chart);

    const Chart& chart() const { return chart_; }
    int dim() const { return chart_.dim(); }

    const ScalarExpr& entry(int i, int j) const {
        return entries_[Jet2::packed_index(i, j, dim())];
    }
    void set_entry(int i, int j, ScalarExpr e);

    /// Component matrix at p.
    Eigen::MatrixXd value_at(const Point& p) const;

    /// Full 2-jet of every component at p; jets[k] corresponds to packed index k.
    std::vector<Jet2> jets_at(const Point& p) const;

    /// Coordinate derivative matrix (d/dx_axis of every component) from jets.
    static Eigen::MatrixXd derivative_matrix(const std::vector<Jet2>& jets, int axis, int dim);
    static Eigen::MatrixXd value_matrix(const std::vector<Jet2>& jets, int dim);

private:
    Chart chart_;
    std::vector<ScalarExpr> entries_;
};

/// A metric: a SymTensorField expected to be symmetric positive definite on
/// its domain. SPD failures surface as DegenerateMetric at point queries and
/// as excluded (counted) nodes in grid sweeps.
class MetricField {
public:
    MetricField() = default;
    explicit MetricField(SymTensorField tensor) : tensor_(std::move(tensor)) {}

    static MetricField euclidean(const Chart& chart);

    const Chart& chart() const { return tensor_.chart(); }
    int dim() const { return tensor_.dim(); }
    const SymTensorField& tensor() const { return tensor_; }
    SymTensorField& tensor() { return tensor_; }

    /// Metric matrix at p; throws DegenerateMetric if not SPD.
    Eigen::MatrixXd value_at(const Point& p) const;

    /// Inverse metric at p (via Cholesky); throws DegenerateMetric if not SPD.
    Eigen::MatrixXd inverse_at(const Point& p) const;

    bool is_spd_at(const Point& p) const;

    /// g-inner product of tangent vectors at p given the metric matrix.
    static double inner(const Eigen::MatrixXd& g, const Eigen::VectorXd& v,
                        const Eigen::VectorXd& w) {
        return v.dot(g * w);
    }
    static double norm(const Eigen::MatrixXd& g, const Eigen::VectorXd& v) {
        return std::sqrt(std::max(0.0, inner(g, v, v)));
    }

private:
    SymTensorField tensor_;
};

} // namespace codazzi
